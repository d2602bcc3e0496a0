#include "rdmc/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rdmc {

std::string stopping_name(Stopping s) {
  return s == Stopping::strict ? "strict" : "liberal";
}

Stopping parse_stopping(const std::string& name) {
  if (name == "strict") return Stopping::strict;
  if (name == "liberal") return Stopping::liberal;
  throw std::invalid_argument("unknown stopping '" + name +
                              "' (expected strict|liberal)");
}

SolverConfig SolverConfig::defaults(const LossSpec& loss, Stopping stopping) {
  SolverConfig config;
  config.loss = loss;
  config.max_iterations = stopping == Stopping::strict ? 100 : 10;
  return config;
}

SolverState init_state(const CenteredMatrix& cm) {
  SolverState state;
  state.l = cm.x.to_dense(0.0);
  state.z.zeros(cm.x.n_rows(), cm.x.n_cols());
  state.theta.zeros(cm.x.n_rows(), cm.x.n_cols());
  state.mu = 0.1;
  state.iteration = 0;
  state.last_loss = std::numeric_limits<double>::infinity();
  return state;
}

double update_z(SolverState& state, double lambda) {
  arma::mat w = state.l + state.theta / state.mu;
  arma::mat u, v;
  arma::vec d;
  if (!arma::svd_econ(u, d, v, w, "both", "dc"))
    throw std::runtime_error("update_z: SVD failed to converge");
  const double threshold = lambda / state.mu;
  arma::uvec keep = arma::find(d > threshold);
  if (keep.is_empty()) {
    state.z.zeros(w.n_rows, w.n_cols);
    return 0.0;
  }
  arma::vec shrunk = d.elem(keep) - threshold;
  state.z = u.cols(keep) * arma::diagmat(shrunk) * v.cols(keep).t();
  return arma::accu(shrunk);
}

namespace {

// Smallest category index whose objective is within `tie_tol` of the minimum.
inline int argmin_with_ties(const double* obj, int k, double tie_tol) {
  double best = obj[0];
  for (int i = 1; i < k; ++i)
    if (obj[i] < best) best = obj[i];
  for (int i = 0; i < k; ++i)
    if (obj[i] <= best + tie_tol) return i;
  return 0;  // unreachable
}

constexpr double kTieTolerance = 1e-12;

}  // namespace

double update_l(SolverState& state, const CenteredMatrix& cm,
                const LossSpec& loss) {
  const int n = cm.x.n_rows();
  const int p = cm.x.n_cols();
  const int k = cm.scale.categories;
  if (k > 64) throw std::invalid_argument("update_l: more than 64 categories");
  double fit = 0.0;
  double categories[64];
  double obj[64];
  for (int j = 0; j < p; ++j) {
    for (int c = 0; c < k; ++c) categories[c] = cm.category(j, c);
    auto col = cm.x.column(j);
    std::size_t next = 0;  // next observed entry of this column, sorted by row
    const double* z_col = state.z.colptr(j);
    const double* theta_col = state.theta.colptr(j);
    double* l_col = state.l.colptr(j);
    for (int i = 0; i < n; ++i) {
      const double w = z_col[i] - theta_col[i] / state.mu;
      if (next < col.size() && col[next].row == i) {
        const double x = col[next].value;
        ++next;
        for (int c = 0; c < k; ++c) {
          const double dz = categories[c] - w;
          obj[c] = loss_value(loss, categories[c] - x) +
                   0.5 * state.mu * dz * dz;
        }
        const int best = argmin_with_ties(obj, k, kTieTolerance);
        l_col[i] = categories[best];
        fit += loss_value(loss, categories[best] - x);
      } else {
        for (int c = 0; c < k; ++c) {
          const double dz = categories[c] - w;
          obj[c] = dz * dz;
        }
        l_col[i] = categories[argmin_with_ties(obj, k, kTieTolerance)];
      }
    }
  }
  return fit;
}

void update_multiplier(SolverState& state, const SolverConfig& config) {
  state.theta += state.mu * (state.l - state.z);
  ++state.iteration;
  // Recomputed from the exponent rather than accumulated so that after t
  // iterations mu equals mu0 * delta^t exactly.
  state.mu = config.mu0 * std::pow(config.delta, state.iteration);
}

double objective(const arma::mat& l, const arma::mat& z,
                 const arma::mat& theta, double mu, double lambda,
                 const LossSpec& loss, const CenteredMatrix& cm) {
  arma::vec d = arma::svd(z);
  const double nuclear = arma::accu(d);
  const double gap = arma::accu(theta % (l - z));
  const double quad = 0.5 * mu * arma::accu(arma::square(l - z));
  return matrix_loss(loss, l, cm.x) + lambda * nuclear + gap + quad;
}

namespace {

SolveResult run_admm(const CenteredMatrix& cm, const SolverConfig& config,
                     SolverState state) {
  if (config.lambda < 0.0)
    throw std::invalid_argument("solve: lambda must be non-negative");
  if (config.max_iterations < 1)
    throw std::invalid_argument("solve: max_iterations must be positive");
  const auto start = std::chrono::steady_clock::now();

  SolveResult result;
  result.diagnostics.lambda = config.lambda;
  double loss_prev = std::numeric_limits<double>::infinity();
  bool converged = false;
  int t = 0;
  double final_loss = 0.0;
  while (t < config.max_iterations && !converged) {
    ++t;
    const double nuclear = update_z(state, config.lambda);
    const double fit = update_l(state, cm, config.loss);
    update_multiplier(state, config);
    // Algorithm loss line, evaluated after the Theta and mu updates. The
    // nuclear norm of Z is the thresholded singular-value sum from update_z.
    const arma::mat gap = state.l - state.z;
    final_loss = fit + config.lambda * nuclear + arma::accu(state.theta % gap) +
                 0.5 * state.mu * arma::accu(arma::square(gap));
    if (t > 1) {
      const double denom = std::abs(loss_prev);
      converged = denom == 0.0 ? final_loss == loss_prev
                               : std::abs(final_loss - loss_prev) / denom <=
                                     config.tolerance;
    }
    loss_prev = final_loss;
  }
  state.last_loss = final_loss;

  result.diagnostics.iterations = t;
  result.diagnostics.converged = converged;
  result.diagnostics.final_loss = final_loss;
  result.diagnostics.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();
  result.l = state.l;
  result.state = std::move(state);
  return result;
}

}  // namespace

SolveResult solve(const CenteredMatrix& cm, const SolverConfig& config) {
  SolverState state = init_state(cm);
  state.mu = config.mu0;
  return run_admm(cm, config, std::move(state));
}

SolveResult solve_warm(const CenteredMatrix& cm, const SolverConfig& config,
                       SolverState state) {
  if (static_cast<int>(state.l.n_rows) != cm.x.n_rows() ||
      static_cast<int>(state.l.n_cols) != cm.x.n_cols())
    throw std::invalid_argument("solve_warm: state dimension mismatch");
  state.mu = config.mu0;
  state.iteration = 0;
  state.last_loss = std::numeric_limits<double>::infinity();
  return run_admm(cm, config, std::move(state));
}

PathResult solve_path(const CenteredMatrix& cm,
                      const std::vector<double>& lambdas,
                      const SolverConfig& base) {
  if (lambdas.empty())
    throw std::invalid_argument("solve_path: empty lambda grid");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1]))
      throw std::invalid_argument(
          "solve_path: lambda grid must be strictly increasing");

  PathResult path;
  path.lambdas = lambdas;
  path.solutions.reserve(lambdas.size());
  path.diagnostics.reserve(lambdas.size());
  SolverConfig config = base;
  SolverState state = init_state(cm);
  state.mu = base.mu0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    config.lambda = lambdas[i];
    SolveResult result =
        i == 0 ? run_admm(cm, config, std::move(state))
               : solve_warm(cm, config, std::move(state));
    path.solutions.push_back(result.l);
    path.diagnostics.push_back(result.diagnostics);
    state = std::move(result.state);
  }
  return path;
}

}  // namespace rdmc
