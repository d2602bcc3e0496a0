#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rdmc/soft_impute.hpp"
#include "test_support.hpp"

using namespace rdmc;
using rdmc::testing::from_dense;
using rdmc::testing::kMissing;

TEST_CASE("soft-impute on a fully observed matrix at lambda 0 is exact") {
  arma::mat dense{{1.0, 4.0, 2.0}, {2.0, 3.0, 5.0}, {5.0, 1.0, 3.0}, {4.0, 2.0, 1.0}};
  SparseRatingMatrix r = from_dense(dense);
  SiConfig config = SiConfig::defaults(Stopping::strict);
  config.lambda = 0.0;
  SiFit fit = si_solve(r, config);
  CHECK(arma::approx_equal(fit.predictions, dense, "absdiff", 1e-8));
}

TEST_CASE("full shrinkage returns column-mean predictions") {
  arma::mat dense{{1.0, 4.0}, {2.0, kMissing}, {5.0, 4.0}, {4.0, 2.0}};
  SparseRatingMatrix r = from_dense(dense);
  SiConfig config = SiConfig::defaults(Stopping::strict);
  config.lambda = 1e6;  // above any singular value the iteration can reach
  SiFit fit = si_solve(r, config);
  const double mean0 = (1.0 + 2.0 + 5.0 + 4.0) / 4.0;
  const double mean1 = (4.0 + 4.0 + 2.0) / 3.0;
  for (int i = 0; i < 4; ++i) {
    CHECK(fit.predictions(i, 0) == doctest::Approx(mean0));
    CHECK(fit.predictions(i, 1) == doctest::Approx(mean1));
  }
  CHECK(fit.col_means[0] == doctest::Approx(mean0));
}

TEST_CASE("rank-1 structure is approximately recovered through missing cells") {
  // Build a rank-1 ratings matrix u v^T, hide a few cells, and check the
  // completion. Recovery is approximate: the solver centers each column by
  // its observed mean, so hiding cells perturbs the structure it fits.
  arma::vec u{1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0};
  arma::vec v{1.0, 2.0, 2.0, 1.0};
  arma::mat truth = u * v.t();
  arma::mat masked = truth;
  masked(0, 1) = kMissing;
  masked(3, 2) = kMissing;
  masked(5, 0) = kMissing;
  SparseRatingMatrix r = from_dense(masked);

  SiConfig config = SiConfig::defaults(Stopping::strict);
  config.lambda = 1e-3;
  config.max_iterations = 500;
  config.tolerance = 1e-10;
  SiFit fit = si_solve(r, config);

  // Observed cells are reproduced nearly exactly at a vanishing penalty.
  for (const Entry& e : r.entries())
    CHECK(std::abs(fit.predictions(e.row, e.col) - e.value) < 0.05);
  // Hidden cells beat plain column-mean imputation: the low-rank structure
  // pulls each prediction toward its rank-1 value.
  std::vector<double> means = column_means(r);
  for (auto [i, j] : {std::pair<int, int>{0, 1}, {3, 2}, {5, 0}}) {
    const double si_error = std::abs(fit.predictions(i, j) - truth(i, j));
    const double mean_error = std::abs(means[j] - truth(i, j));
    CHECK(si_error < mean_error);
    CHECK(si_error < 1.0);
  }
}

TEST_CASE("objective history is non-increasing") {
  Rng rng(21);
  SparseRatingMatrix r = rdmc::testing::random_sparse(15, 10, 5, 0.5, rng);
  SiConfig config = SiConfig::defaults(Stopping::strict);
  config.lambda = 2.0;
  SiFit fit = si_solve(r, config);
  REQUIRE(fit.objective_history.size() >= 2);
  for (std::size_t t = 1; t < fit.objective_history.size(); ++t)
    CHECK(fit.objective_history[t] <= fit.objective_history[t - 1] + 1e-9);
}

TEST_CASE("stopping presets") {
  CHECK(SiConfig::defaults(Stopping::liberal).tolerance == 1e-3);
  CHECK(SiConfig::defaults(Stopping::strict).tolerance == 1e-4);
  CHECK(SiConfig::defaults(Stopping::strict).max_iterations == 100);
}

TEST_CASE("descending path warm-starts and rejects other orders") {
  Rng rng(4);
  SparseRatingMatrix r = rdmc::testing::random_sparse(12, 8, 5, 0.6, rng);
  SiConfig base = SiConfig::defaults(Stopping::strict);

  SiPathResult path = si_solve_path(r, {5.0, 2.0, 0.5}, base);
  REQUIRE(path.fits.size() == 3);
  CHECK(path.lambdas == std::vector<double>{5.0, 2.0, 0.5});
  for (const SiFit& fit : path.fits) CHECK(fit.predictions.is_finite());

  CHECK_THROWS(si_solve_path(r, {0.5, 2.0}, base));
  CHECK_THROWS(si_solve_path(r, {2.0, 2.0}, base));
}

TEST_CASE("warm start continues from a given iterate") {
  Rng rng(9);
  SparseRatingMatrix r = rdmc::testing::random_sparse(10, 6, 5, 0.5, rng);
  SiConfig config = SiConfig::defaults(Stopping::strict);
  config.lambda = 1.0;
  SiFit cold = si_solve(r, config);
  // Warm-starting from the converged iterate converges again immediately and
  // stays nearby. (The stopping rule tolerates a small relative step, so the
  // iterate may still move a little; exact equality is not expected.)
  SiFit warm = si_solve_warm(r, config, cold.y);
  CHECK(warm.diagnostics.iterations <= 2);
  CHECK(arma::abs(warm.predictions - cold.predictions).max() < 0.1);
}

TEST_CASE("discretization rounds half away from zero and clamps to the scale") {
  RatingScale scale{5};
  arma::mat y{{3.4, 5.7, 0.2}, {2.5, 1.5, 4.5}, {-1.0, 3.0, 6.0}};
  arma::mat d = discretize_predictions(y, scale);
  CHECK(d(0, 0) == 3.0);
  CHECK(d(0, 1) == 5.0);  // clamp high
  CHECK(d(0, 2) == 1.0);  // clamp low
  CHECK(d(1, 0) == 3.0);  // 2.5 rounds up
  CHECK(d(1, 1) == 2.0);  // 1.5 rounds up
  CHECK(d(1, 2) == 5.0);  // 4.5 rounds up
  CHECK(d(2, 0) == 1.0);
  CHECK(d(2, 2) == 5.0);

  SUBCASE("idempotent") {
    arma::mat dd = discretize_predictions(d, scale);
    CHECK(arma::approx_equal(dd, d, "absdiff", 0.0));
  }

  SUBCASE("every output is an integer category") {
    for (double cell : d) {
      CHECK(cell >= 1.0);
      CHECK(cell <= 5.0);
      CHECK(cell == std::floor(cell));
    }
  }
}
