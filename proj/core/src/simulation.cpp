#include "rdmc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rdmc/rng.hpp"

namespace rdmc {

std::string missingness_name(Missingness m) {
  return m == Missingness::mnar ? "mnar" : "mcar";
}

Missingness parse_missingness(const std::string& name) {
  if (name == "mnar") return Missingness::mnar;
  if (name == "mcar") return Missingness::mcar;
  throw std::invalid_argument("unknown missingness '" + name +
                              "' (expected mnar|mcar)");
}

SparseRatingMatrix SimTruth::make_observed() const {
  std::vector<Entry> entries;
  entries.reserve(values.n_elem);
  for (int j = 0; j < static_cast<int>(values.n_cols); ++j)
    for (int i = 0; i < static_cast<int>(values.n_rows); ++i)
      if (observed(i, j))
        entries.push_back({i, j, static_cast<double>(values(i, j))});
  return SparseRatingMatrix(static_cast<int>(values.n_rows),
                            static_cast<int>(values.n_cols), std::move(entries));
}

std::vector<double> recommender_breakpoints(int categories) {
  switch (categories) {
    case 3:
      return {0.0, 1.5};
    case 5:
      return {-1.5, -0.5, 0.5, 1.5};
    case 10:
      return {-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};
    default:
      throw std::invalid_argument(
          "recommender_breakpoints: calibrated scales exist for K in {3, 5, 10}");
  }
}

std::vector<double> survey_breakpoints(int categories) {
  if (categories < 2)
    throw std::invalid_argument("survey_breakpoints: need at least 2 categories");
  std::vector<double> b(categories - 1);
  const double start = -static_cast<double>(categories) / 2.0 + 1.0;
  for (int i = 0; i < categories - 1; ++i) b[i] = start + i;
  return b;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must be in (0, 1)");
  // Beasley-Springer-Moro-style rational starting point.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Two Newton polishes against the erfc-based CDF push the error to ~1e-15.
  for (int it = 0; it < 2; ++it) {
    const double cdf = 0.5 * std::erfc(-x / std::sqrt(2.0));
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * arma::datum::pi);
    x -= (cdf - p) / pdf;
  }
  return x;
}

double mean_shift_max(const std::vector<double>& breakpoints) {
  if (breakpoints.empty())
    throw std::invalid_argument("mean_shift_max: empty breakpoint list");
  return breakpoints.back() - normal_quantile(0.6);
}

namespace {

int discretize_value(double v, const std::vector<double>& breakpoints) {
  int category = 1;
  for (double b : breakpoints)
    if (v > b) ++category;
  return category;
}

arma::mat standard_normal(int n_rows, int n_cols, Rng& rng) {
  arma::mat m(n_rows, n_cols);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : m) v = normal(rng);  // column-major fill order
  return m;
}

}  // namespace

SimTruth gen_recommender(const RecommenderSimConfig& config) {
  if (config.n < 1 || config.p < 1 || config.rank < 1)
    throw std::invalid_argument("gen_recommender: dimensions must be positive");
  const std::vector<double> breakpoints = recommender_breakpoints(config.categories);

  Rng rng(config.seed);
  arma::mat a = standard_normal(config.n, config.rank, rng);
  arma::mat b = standard_normal(config.p, config.rank, rng);
  arma::mat e = standard_normal(config.n, config.p, rng);

  SimTruth truth;
  truth.scale.categories = config.categories;
  truth.shift_max = mean_shift_max(breakpoints);
  truth.latent = (a * b.t() + e) / std::sqrt(static_cast<double>(config.rank) + 1.0);

  std::uniform_real_distribution<double> shift(-truth.shift_max, truth.shift_max);
  truth.shifts.resize(config.p);
  for (int j = 0; j < config.p; ++j) truth.shifts[j] = shift(rng);

  truth.r_full.set_size(config.n, config.p);
  for (int j = 0; j < config.p; ++j)
    for (int i = 0; i < config.n; ++i)
      truth.r_full(i, j) =
          discretize_value(truth.latent(i, j) + truth.shifts[j], breakpoints);
  truth.values = truth.r_full;
  truth.observed.set_size(config.n, config.p);
  truth.observed.fill(1);
  return truth;
}

void inject_mnar(SimTruth& truth, std::uint64_t seed) {
  const int n = truth.r_full.n_rows;
  const int p = truth.r_full.n_cols;
  if (static_cast<int>(truth.shifts.size()) != p)
    throw std::invalid_argument("inject_mnar: truth has no per-column shifts");
  if (!(truth.shift_max > 0.0))
    throw std::invalid_argument("inject_mnar: truth has no shift range");
  Rng rng(seed);
  for (int j = 0; j < p; ++j) {
    const double pi =
        0.4 + 0.59 * (-truth.shifts[j] + truth.shift_max) / (2.0 * truth.shift_max);
    const auto remove = static_cast<std::uint64_t>(std::llround(pi * n));
    for (std::uint64_t i : sample_without_replacement(n, remove, rng))
      truth.observed(static_cast<int>(i), j) = 0;
  }
}

void inject_mcar(SimTruth& truth, double gamma, std::uint64_t seed) {
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::invalid_argument("inject_mcar: gamma must be in [0, 1)");
  const int n = truth.r_full.n_rows;
  const int p = truth.r_full.n_cols;
  const auto total = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(p);
  const auto remove = static_cast<std::uint64_t>(std::llround(gamma * total));
  Rng rng(seed);
  for (std::uint64_t cell : sample_without_replacement(total, remove, rng)) {
    // Cells are numbered column-major to match the dense storage order.
    const int j = static_cast<int>(cell / n);
    const int i = static_cast<int>(cell % n);
    truth.observed(i, j) = 0;
  }
  // Repair columns that lost everything: bring one of their cells back and
  // take one from a column that can spare it, preserving the missing count.
  for (int j = 0; j < p; ++j) {
    bool any = false;
    for (int i = 0; i < n; ++i)
      if (truth.observed(i, j)) { any = true; break; }
    if (any) continue;
    std::uniform_int_distribution<int> pick_row(0, n - 1);
    truth.observed(pick_row(rng), j) = 1;
    std::vector<std::pair<int, int>> donors;
    for (int jj = 0; jj < p; ++jj) {
      if (jj == j) continue;
      int count = 0;
      for (int i = 0; i < n; ++i) count += truth.observed(i, jj);
      if (count >= 2)
        for (int i = 0; i < n; ++i)
          if (truth.observed(i, jj)) donors.emplace_back(i, jj);
    }
    if (donors.empty())
      throw std::runtime_error("inject_mcar: cannot repair an empty column");
    std::uniform_int_distribution<std::size_t> pick(0, donors.size() - 1);
    const auto [di, dj] = donors[pick(rng)];
    truth.observed(di, dj) = 0;
  }
}

SimTruth gen_survey(const SurveySimConfig& config) {
  if (config.n < 1 || config.constructs < 1 || config.items_per_construct < 1)
    throw std::invalid_argument("gen_survey: dimensions must be positive");
  const int p = config.constructs * config.items_per_construct;
  const std::vector<double> breakpoints = survey_breakpoints(config.categories);

  // Sigma_ab = 0.6^{|k(a)-k(b)|+1} off the diagonal, 1 on it: items within a
  // construct correlate at 0.6 and the coupling decays across constructs.
  arma::mat sigma(p, p);
  for (int a = 0; a < p; ++a) {
    const int ka = a / config.items_per_construct;
    for (int b = 0; b < p; ++b) {
      const int kb = b / config.items_per_construct;
      sigma(a, b) = a == b ? 1.0 : std::pow(0.6, std::abs(ka - kb) + 1);
    }
  }
  arma::mat chol_upper;
  if (!arma::chol(chol_upper, sigma))
    throw std::runtime_error("gen_survey: construct covariance is not positive definite");

  Rng rng(config.seed);
  arma::mat g = standard_normal(config.n, p, rng);

  SimTruth truth;
  truth.scale.categories = config.categories;
  truth.shift_max = mean_shift_max(breakpoints);
  truth.latent = g * chol_upper;

  std::uniform_real_distribution<double> shift(0.0, truth.shift_max);
  std::vector<double> construct_shift(config.constructs);
  for (int k = 0; k < config.constructs; ++k) construct_shift[k] = shift(rng);
  truth.shifts.resize(p);
  for (int j = 0; j < p; ++j)
    truth.shifts[j] = construct_shift[j / config.items_per_construct];

  arma::Mat<int> r(config.n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < config.n; ++i)
      r(i, j) = discretize_value(truth.latent(i, j) + truth.shifts[j], breakpoints);

  // Reverse-key the second half of each construct's items (c -> K+1-c); the
  // shared column shuffle below makes the specific choice immaterial.
  std::vector<unsigned char> reversed_item(p, 0);
  for (int k = 0; k < config.constructs; ++k)
    for (int m = config.items_per_construct / 2; m < config.items_per_construct; ++m)
      reversed_item[k * config.items_per_construct + m] = 1;
  for (int j = 0; j < p; ++j)
    if (reversed_item[j])
      for (int i = 0; i < config.n; ++i)
        r(i, j) = config.categories + 1 - r(i, j);

  std::vector<int> perm(p);
  for (int j = 0; j < p; ++j) perm[j] = j;
  std::shuffle(perm.begin(), perm.end(), rng);

  truth.r_full.set_size(config.n, p);
  truth.reversed.resize(p);
  std::vector<double> shifts_out(p);
  arma::mat latent_out(config.n, p);
  for (int j = 0; j < p; ++j) {
    truth.r_full.col(j) = r.col(perm[j]);
    latent_out.col(j) = truth.latent.col(perm[j]);
    truth.reversed[j] = reversed_item[perm[j]];
    shifts_out[j] = truth.shifts[perm[j]];
  }
  truth.latent = std::move(latent_out);
  truth.shifts = std::move(shifts_out);
  truth.item_permutation = std::move(perm);
  truth.values = truth.r_full;
  truth.observed.set_size(config.n, p);
  truth.observed.fill(1);
  return truth;
}

void inject_abandonment(SimTruth& truth, double gamma, std::uint64_t seed) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("inject_abandonment: gamma must be in [0, 1]");
  const int n = truth.r_full.n_rows;
  const int p = truth.r_full.n_cols;
  const auto count = static_cast<std::uint64_t>(std::llround(gamma * n));
  Rng rng(seed);
  std::vector<std::uint64_t> rows = sample_without_replacement(n, count, rng);
  std::sort(rows.begin(), rows.end());
  std::uniform_int_distribution<int> stop_item(0, p - 1);
  for (std::uint64_t row : rows) {
    const int stop = stop_item(rng);  // abandon at this item: it and all later
    for (int j = stop; j < p; ++j)
      truth.observed(static_cast<int>(row), j) = 0;
  }
}

void inject_careless(SimTruth& truth, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("inject_careless: epsilon must be in [0, 1]");
  const int n = truth.r_full.n_rows;
  const int p = truth.r_full.n_cols;
  const int k = truth.scale.categories;
  const auto count = static_cast<std::uint64_t>(std::llround(epsilon * n));
  Rng rng(seed);
  std::vector<std::uint64_t> rows = sample_without_replacement(n, count, rng);
  std::sort(rows.begin(), rows.end());
  std::uniform_int_distribution<int> coin(0, 1);
  truth.careless_rows.clear();
  for (std::uint64_t row : rows) {
    truth.careless_rows.push_back(static_cast<int>(row));
    for (int j = 0; j < p; ++j)
      if (truth.observed(static_cast<int>(row), j))
        truth.values(static_cast<int>(row), j) = coin(rng) == 0 ? 1 : k;
  }
}

}  // namespace rdmc
