#pragma once

#include <armadillo>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rdmc/loss.hpp"
#include "rdmc/rating_matrix.hpp"

namespace rdmc {

enum class Stopping { strict, liberal };

std::string stopping_name(Stopping s);
Stopping parse_stopping(const std::string& name);

// ADMM parameters. lambda is the absolute nuclear-norm weight (grid scaling
// by the largest singular value happens in model selection, not here).
struct SolverConfig {
  double lambda = 0.0;
  double mu0 = 0.1;
  double delta = 1.05;
  double tolerance = 1e-4;
  int max_iterations = 100;  // strict: 100; liberal: 10
  LossSpec loss;

  static SolverConfig defaults(const LossSpec& loss, Stopping stopping);
};

// Iterate state. `iteration` counts completed iterations; the multiplier
// penalty for the upcoming iteration is mu = mu0 * delta^iteration, so at the
// start of iteration t (1-based) the updates use mu0 * delta^(t-1).
struct SolverState {
  arma::mat l;      // discrete iterate (centered categories)
  arma::mat z;      // low-rank iterate
  arma::mat theta;  // scaled multiplier
  double mu = 0.1;
  int iteration = 0;
  double last_loss = std::numeric_limits<double>::infinity();
};

struct SolverDiagnostics {
  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;
  double final_loss = 0.0;
  double wall_time_ms = 0.0;
};

struct SolveResult {
  arma::mat l;  // centered scale; map back with assemble_completion
  SolverDiagnostics diagnostics;
  SolverState state;  // final state, reusable as a warm start
};

struct PathResult {
  std::vector<double> lambdas;
  std::vector<arma::mat> solutions;
  std::vector<SolverDiagnostics> diagnostics;
};

// L = P_Omega(X) (median imputation on the centered scale), Z unset until the
// first update, Theta = 0.
SolverState init_state(const CenteredMatrix& cm);

// Z-update: soft-threshold the singular values of L + Theta/mu at lambda/mu.
// Returns the nuclear norm of the new Z, i.e. sum(max(d_i - lambda/mu, 0)).
double update_z(SolverState& state, double lambda);

// L-update: per-cell minimization over the column's centered categories.
// Observed cells minimize rho(c - X_ij) + mu/2 (c - Z_ij + Theta_ij/mu)^2;
// unobserved cells take the category nearest to Z_ij - Theta_ij/mu. Ties
// (within 1e-12 of the minimum) go to the smallest category. Returns the
// fitting term sum_Omega rho(L_ij - X_ij) of the new L.
double update_l(SolverState& state, const CenteredMatrix& cm,
                const LossSpec& loss);

// Theta += mu (L - Z); then mu advances to mu0 * delta^iteration.
void update_multiplier(SolverState& state, const SolverConfig& config);

// Augmented Lagrangian at the given point:
//   sum_Omega rho(L-X) + lambda ||Z||_* + <Theta, L-Z> + mu/2 ||L-Z||_F^2
// with the nuclear norm computed from a fresh SVD of Z.
double objective(const arma::mat& l, const arma::mat& z,
                 const arma::mat& theta, double mu, double lambda,
                 const LossSpec& loss, const CenteredMatrix& cm);

// Run ADMM from a cold start. Convergence is declared from the second
// iteration on when |Loss(t) - Loss(t-1)| / |Loss(t-1)| <= tolerance, with
// the loss line evaluated after the Theta and mu updates.
SolveResult solve(const CenteredMatrix& cm, const SolverConfig& config);

// Same, continuing from a caller-provided state (L and Theta are kept; mu,
// the iteration counter, and the loss monitor restart).
SolveResult solve_warm(const CenteredMatrix& cm, const SolverConfig& config,
                       SolverState state);

// Fit a strictly ascending lambda grid, warm-starting L and Theta from the
// previous lambda and resetting mu to mu0 for each. Throws on a grid that is
// not strictly increasing.
PathResult solve_path(const CenteredMatrix& cm,
                      const std::vector<double>& lambdas,
                      const SolverConfig& base);

}  // namespace rdmc
