#pragma once

#include <armadillo>
#include <vector>

#include "rdmc/rating_matrix.hpp"
#include "rdmc/solver.hpp"

namespace rdmc {

// Soft-Impute parameters. Stopping is a threshold on the relative iterate
// change ||Y_new - Y_old||_F^2 / ||Y_old||_F^2: 1e-3 (liberal) or 1e-4
// (strict), capped at max_iterations either way.
struct SiConfig {
  double lambda = 0.0;
  double tolerance = 1e-4;
  int max_iterations = 100;

  static SiConfig defaults(Stopping stopping);
};

struct SiFit {
  arma::mat predictions;   // original scale, continuous (column means added)
  arma::mat y;             // centered low-rank iterate (warm-start handle)
  std::vector<double> col_means;
  std::vector<double> objective_history;  // one value per iteration
  SolverDiagnostics diagnostics;
};

struct SiPathResult {
  std::vector<double> lambdas;  // as fitted (descending)
  std::vector<SiFit> fits;
};

// Iterative soft-thresholded SVD on the mean-centered matrix: fill the
// unobserved cells with the current low-rank iterate, soft-threshold the
// singular values at lambda, repeat. Cold start fills with zeros (column-mean
// imputation on the original scale).
SiFit si_solve(const SparseRatingMatrix& r, const SiConfig& config);

// Warm variant continuing from a previous centered iterate y0.
SiFit si_solve_warm(const SparseRatingMatrix& r, const SiConfig& config,
                    const arma::mat& y0);

// Fit a strictly descending lambda sequence with warm starts (the largest
// lambda shrinks everything to zero quickly, and each solution seeds the
// next). Throws on a grid that is not strictly decreasing.
SiPathResult si_solve_path(const SparseRatingMatrix& r,
                           const std::vector<double>& lambdas,
                           const SiConfig& base);

// Map continuous predictions onto the rating scale: round half away from
// zero, then clamp to [1, K]. Idempotent on already-discrete values.
arma::mat discretize_predictions(const arma::mat& predictions,
                                 const RatingScale& scale);

}  // namespace rdmc
