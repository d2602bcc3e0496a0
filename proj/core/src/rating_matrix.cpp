#include "rdmc/rating_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rdmc/rng.hpp"

namespace rdmc {

bool RatingScale::contains(double v) const {
  if (categories < 2) return false;
  double k = std::round(v);
  return std::abs(v - k) <= 1e-9 && k >= 1.0 && k <= max_value();
}

SparseRatingMatrix::SparseRatingMatrix(int n_rows, int n_cols,
                                       std::vector<Entry> entries)
    : n_rows_(n_rows), n_cols_(n_cols), entries_(std::move(entries)) {
  if (n_rows_ < 0 || n_cols_ < 0)
    throw std::invalid_argument("SparseRatingMatrix: negative dimensions");
  for (const Entry& e : entries_) {
    if (e.row < 0 || e.row >= n_rows_ || e.col < 0 || e.col >= n_cols_)
      throw std::invalid_argument(
          "SparseRatingMatrix: entry (" + std::to_string(e.row) + ", " +
          std::to_string(e.col) + ") outside " + std::to_string(n_rows_) +
          "x" + std::to_string(n_cols_));
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].row == entries_[i - 1].row &&
        entries_[i].col == entries_[i - 1].col)
      throw std::invalid_argument(
          "SparseRatingMatrix: duplicate entry at (" +
          std::to_string(entries_[i].row) + ", " +
          std::to_string(entries_[i].col) + ")");
  }
  col_ptr_.assign(static_cast<std::size_t>(n_cols_) + 1, 0);
  for (const Entry& e : entries_) ++col_ptr_[static_cast<std::size_t>(e.col) + 1];
  for (int j = 0; j < n_cols_; ++j) col_ptr_[j + 1] += col_ptr_[j];
}

std::span<const Entry> SparseRatingMatrix::column(int j) const {
  if (j < 0 || j >= n_cols_)
    throw std::out_of_range("SparseRatingMatrix::column: bad column index");
  return {entries_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
}

std::size_t SparseRatingMatrix::column_count(int j) const {
  return column(j).size();
}

bool SparseRatingMatrix::has(int i, int j) const {
  auto col = column(j);
  return std::binary_search(
      col.begin(), col.end(), Entry{i, j, 0.0},
      [](const Entry& a, const Entry& b) { return a.row < b.row; });
}

arma::mat SparseRatingMatrix::to_dense(double fill) const {
  arma::mat out(n_rows_, n_cols_);
  out.fill(fill);
  for (const Entry& e : entries_) out(e.row, e.col) = e.value;
  return out;
}

arma::Mat<unsigned char> SparseRatingMatrix::observed_mask() const {
  arma::Mat<unsigned char> mask(n_rows_, n_cols_, arma::fill::zeros);
  for (const Entry& e : entries_) mask(e.row, e.col) = 1;
  return mask;
}

std::size_t MaskSplit::test_count() const {
  std::size_t c = 0;
  for (auto v : is_test) c += v;
  return c;
}

std::vector<std::size_t> MaskSplit::test_ids() const {
  std::vector<std::size_t> ids;
  ids.reserve(test_count());
  for (std::size_t i = 0; i < is_test.size(); ++i)
    if (is_test[i]) ids.push_back(i);
  return ids;
}

SparseRatingMatrix MaskSplit::train_matrix(const SparseRatingMatrix& parent) const {
  if (is_test.size() != parent.nnz())
    throw std::invalid_argument("MaskSplit: size does not match parent nnz");
  std::vector<Entry> keep;
  keep.reserve(parent.nnz() - test_count());
  for (std::size_t i = 0; i < is_test.size(); ++i)
    if (!is_test[i]) keep.push_back(parent.entry(i));
  return SparseRatingMatrix(parent.n_rows(), parent.n_cols(), std::move(keep));
}

std::vector<Entry> MaskSplit::test_entries(const SparseRatingMatrix& parent) const {
  if (is_test.size() != parent.nnz())
    throw std::invalid_argument("MaskSplit: size does not match parent nnz");
  std::vector<Entry> out;
  out.reserve(test_count());
  for (std::size_t i = 0; i < is_test.size(); ++i)
    if (is_test[i]) out.push_back(parent.entry(i));
  return out;
}

std::vector<double> column_medians(const SparseRatingMatrix& r) {
  std::vector<double> medians(r.n_cols());
  std::vector<double> vals;
  for (int j = 0; j < r.n_cols(); ++j) {
    auto col = r.column(j);
    if (col.empty())
      throw std::invalid_argument("column_medians: column " +
                                  std::to_string(j) + " has no observations");
    vals.clear();
    for (const Entry& e : col) vals.push_back(e.value);
    std::sort(vals.begin(), vals.end());
    std::size_t m = vals.size();
    medians[j] = (m % 2 == 1) ? vals[m / 2]
                              : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
  }
  return medians;
}

std::vector<double> column_means(const SparseRatingMatrix& r) {
  std::vector<double> means(r.n_cols());
  for (int j = 0; j < r.n_cols(); ++j) {
    auto col = r.column(j);
    if (col.empty())
      throw std::invalid_argument("column_means: column " + std::to_string(j) +
                                  " has no observations");
    double sum = 0.0;
    for (const Entry& e : col) sum += e.value;
    means[j] = sum / static_cast<double>(col.size());
  }
  return means;
}

CenteredMatrix center(const SparseRatingMatrix& r, const RatingScale& scale) {
  if (scale.categories < 2)
    throw std::invalid_argument("center: scale needs at least two categories");
  CenteredMatrix cm;
  cm.medians = column_medians(r);
  cm.scale = scale;
  std::vector<Entry> centered = r.entries();
  for (Entry& e : centered) {
    if (!scale.contains(e.value))
      throw std::invalid_argument("center: rating " + std::to_string(e.value) +
                                  " outside scale 1.." +
                                  std::to_string(scale.categories));
    e.value -= cm.medians[e.col];
  }
  cm.x = SparseRatingMatrix(r.n_rows(), r.n_cols(), std::move(centered));
  return cm;
}

arma::mat assemble_completion(const arma::mat& l, const CenteredMatrix& cm) {
  if (static_cast<int>(l.n_rows) != cm.x.n_rows() ||
      static_cast<int>(l.n_cols) != cm.x.n_cols())
    throw std::invalid_argument("assemble_completion: dimension mismatch");
  arma::mat out(l.n_rows, l.n_cols);
  for (int j = 0; j < cm.x.n_cols(); ++j) {
    for (int i = 0; i < cm.x.n_rows(); ++i) {
      double v = l(i, j);
      bool on_grid = false;
      for (int k = 0; k < cm.scale.categories; ++k) {
        if (std::abs(v - cm.category(j, k)) <= 1e-9) {
          on_grid = true;
          break;
        }
      }
      if (!on_grid)
        throw std::invalid_argument(
            "assemble_completion: cell (" + std::to_string(i) + ", " +
            std::to_string(j) + ") = " + std::to_string(v) +
            " is not a centered category of its column");
      out(i, j) = v + cm.medians[j];
    }
  }
  // Observed cells keep their input ratings; for rating data all values and
  // medians are half-integers, so the add-back below is exact.
  for (const Entry& e : cm.x.entries())
    out(e.row, e.col) = e.value + cm.medians[e.col];
  return out;
}

namespace {

// Restore training coverage for columns emptied by a random mask: move one
// test entry of the emptied column back to training and push one training
// entry from a column that can spare it (>= 2 training entries) out to test.
void repair_empty_columns(const SparseRatingMatrix& r, MaskSplit& split,
                          Rng& rng) {
  std::vector<int> train_count(r.n_cols(), 0);
  for (std::size_t id = 0; id < r.nnz(); ++id)
    if (!split.is_test[id]) ++train_count[r.entry(id).col];

  for (int j = 0; j < r.n_cols(); ++j) {
    if (r.column_count(j) == 0 || train_count[j] > 0) continue;

    std::vector<std::size_t> col_test_ids;
    for (std::size_t id = 0; id < r.nnz(); ++id)
      if (split.is_test[id] && r.entry(id).col == j) col_test_ids.push_back(id);
    std::uniform_int_distribution<std::size_t> pick_back(0, col_test_ids.size() - 1);
    split.is_test[col_test_ids[pick_back(rng)]] = 0;
    ++train_count[j];

    std::vector<std::size_t> donor_ids;
    for (std::size_t id = 0; id < r.nnz(); ++id) {
      const Entry& e = r.entry(id);
      if (!split.is_test[id] && e.col != j && train_count[e.col] >= 2)
        donor_ids.push_back(id);
    }
    if (donor_ids.empty())
      throw std::runtime_error(
          "split_train_test: cannot preserve the test count while keeping "
          "every column observed in training");
    std::uniform_int_distribution<std::size_t> pick_out(0, donor_ids.size() - 1);
    std::size_t out_id = donor_ids[pick_out(rng)];
    split.is_test[out_id] = 1;
    --train_count[r.entry(out_id).col];
  }
}

}  // namespace

MaskSplit split_train_test(const SparseRatingMatrix& r, double test_fraction,
                           std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("split_train_test: fraction must be in (0, 1)");
  if (r.nnz() == 0)
    throw std::invalid_argument("split_train_test: empty matrix");

  auto n_test = static_cast<std::uint64_t>(
      std::llround(test_fraction * static_cast<double>(r.nnz())));
  Rng rng(seed);
  MaskSplit split;
  split.is_test.assign(r.nnz(), 0);
  for (std::uint64_t id : sample_without_replacement(r.nnz(), n_test, rng))
    split.is_test[id] = 1;
  repair_empty_columns(r, split, rng);
  return split;
}

std::vector<MaskSplit> holdout_masks(const SparseRatingMatrix& r,
                                     double fraction, int replications,
                                     std::uint64_t seed) {
  if (replications < 1)
    throw std::invalid_argument("holdout_masks: need at least one replication");
  std::vector<MaskSplit> masks;
  masks.reserve(replications);
  for (int k = 0; k < replications; ++k)
    masks.push_back(split_train_test(r, fraction, seed + static_cast<std::uint64_t>(k)));
  return masks;
}

}  // namespace rdmc
