#include "rdmc/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rdmc/rng.hpp"

namespace rdmc {

arma::mat median_impute(const SparseRatingMatrix& r) {
  std::vector<double> medians = column_medians(r);
  arma::mat out(r.n_rows(), r.n_cols());
  for (int j = 0; j < r.n_cols(); ++j) out.col(j).fill(medians[j]);
  for (const Entry& e : r.entries()) out(e.row, e.col) = e.value;
  return out;
}

arma::mat median_impute_discretized(const SparseRatingMatrix& r,
                                    const RatingScale& scale,
                                    std::uint64_t seed) {
  std::vector<double> medians = column_medians(r);
  arma::Mat<unsigned char> observed = r.observed_mask();
  arma::mat out(r.n_rows(), r.n_cols());
  Rng rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int j = 0; j < r.n_cols(); ++j) {
    const double m = medians[j];
    const double lower = std::floor(m);
    const double upper = std::ceil(m);
    if (lower < scale.min_value() || upper > scale.max_value())
      throw std::invalid_argument(
          "median_impute_discretized: median outside the rating scale");
    const bool on_grid = lower == upper;
    for (int i = 0; i < r.n_rows(); ++i) {
      if (observed(i, j)) continue;
      out(i, j) = on_grid ? m : (coin(rng) == 0 ? lower : upper);
    }
  }
  for (const Entry& e : r.entries()) out(e.row, e.col) = e.value;
  return out;
}

arma::mat mode_impute(const SparseRatingMatrix& r, const RatingScale& scale,
                      std::uint64_t seed) {
  const int k = scale.categories;
  arma::Mat<unsigned char> observed = r.observed_mask();
  arma::mat out(r.n_rows(), r.n_cols());
  Rng rng(seed);
  std::vector<int> counts(k);
  std::vector<double> modes;
  for (int j = 0; j < r.n_cols(); ++j) {
    auto col = r.column(j);
    if (col.empty())
      throw std::invalid_argument("mode_impute: column " + std::to_string(j) +
                                  " has no observations");
    std::fill(counts.begin(), counts.end(), 0);
    for (const Entry& e : col) {
      const int c = static_cast<int>(std::lround(e.value)) - 1;
      if (c < 0 || c >= k)
        throw std::invalid_argument("mode_impute: rating outside the scale");
      ++counts[c];
    }
    const int top = *std::max_element(counts.begin(), counts.end());
    modes.clear();
    for (int c = 0; c < k; ++c)
      if (counts[c] == top) modes.push_back(scale.value(c));
    std::uniform_int_distribution<std::size_t> pick(0, modes.size() - 1);
    for (int i = 0; i < r.n_rows(); ++i) {
      if (observed(i, j)) continue;
      out(i, j) = modes.size() == 1 ? modes.front() : modes[pick(rng)];
    }
  }
  for (const Entry& e : r.entries()) out(e.row, e.col) = e.value;
  return out;
}

}  // namespace rdmc
