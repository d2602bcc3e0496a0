#include "rdmc/soft_impute.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rdmc {

SiConfig SiConfig::defaults(Stopping stopping) {
  SiConfig config;
  config.tolerance = stopping == Stopping::strict ? 1e-4 : 1e-3;
  return config;
}

namespace {

SiFit run_soft_impute(const SparseRatingMatrix& r, const SiConfig& config,
                      arma::mat y) {
  if (config.lambda < 0.0)
    throw std::invalid_argument("si_solve: lambda must be non-negative");
  if (config.max_iterations < 1)
    throw std::invalid_argument("si_solve: max_iterations must be positive");
  const auto start = std::chrono::steady_clock::now();

  SiFit fit;
  fit.col_means = column_means(r);
  fit.diagnostics.lambda = config.lambda;

  // Mean-centered observed values in dense form, plus the observation mask.
  arma::mat x_observed(r.n_rows(), r.n_cols(), arma::fill::zeros);
  for (const Entry& e : r.entries())
    x_observed(e.row, e.col) = e.value - fit.col_means[e.col];

  bool converged = false;
  int t = 0;
  while (t < config.max_iterations && !converged) {
    ++t;
    // Observed cells from the data, unobserved from the current iterate.
    arma::mat filled = y;
    for (const Entry& e : r.entries())
      filled(e.row, e.col) = x_observed(e.row, e.col);

    arma::mat u, v;
    arma::vec d;
    if (!arma::svd_econ(u, d, v, filled, "both", "dc"))
      throw std::runtime_error("si_solve: SVD failed to converge");
    arma::uvec keep = arma::find(d > config.lambda);
    arma::mat y_new;
    double nuclear = 0.0;
    if (keep.is_empty()) {
      y_new.zeros(filled.n_rows, filled.n_cols);
    } else {
      arma::vec shrunk = d.elem(keep) - config.lambda;
      y_new = u.cols(keep) * arma::diagmat(shrunk) * v.cols(keep).t();
      nuclear = arma::accu(shrunk);
    }

    double fit_term = 0.0;
    for (const Entry& e : r.entries()) {
      const double residual = x_observed(e.row, e.col) - y_new(e.row, e.col);
      fit_term += residual * residual;
    }
    fit.objective_history.push_back(0.5 * fit_term + config.lambda * nuclear);

    const double denom = arma::accu(arma::square(y));
    const double change = arma::accu(arma::square(y_new - y));
    if (denom > 0.0)
      converged = change / denom <= config.tolerance;
    else
      converged = change == 0.0;
    y = std::move(y_new);
  }

  fit.y = y;
  fit.predictions = std::move(y);
  for (int j = 0; j < r.n_cols(); ++j)
    fit.predictions.col(j) += fit.col_means[j];
  fit.diagnostics.iterations = t;
  fit.diagnostics.converged = converged;
  fit.diagnostics.final_loss = fit.objective_history.back();
  fit.diagnostics.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();
  return fit;
}

}  // namespace

SiFit si_solve(const SparseRatingMatrix& r, const SiConfig& config) {
  return run_soft_impute(r, config,
                         arma::mat(r.n_rows(), r.n_cols(), arma::fill::zeros));
}

SiFit si_solve_warm(const SparseRatingMatrix& r, const SiConfig& config,
                    const arma::mat& y0) {
  if (static_cast<int>(y0.n_rows) != r.n_rows() ||
      static_cast<int>(y0.n_cols) != r.n_cols())
    throw std::invalid_argument("si_solve_warm: warm start dimension mismatch");
  return run_soft_impute(r, config, y0);
}

SiPathResult si_solve_path(const SparseRatingMatrix& r,
                           const std::vector<double>& lambdas,
                           const SiConfig& base) {
  if (lambdas.empty())
    throw std::invalid_argument("si_solve_path: empty lambda grid");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] < lambdas[i - 1]))
      throw std::invalid_argument(
          "si_solve_path: lambda grid must be strictly decreasing");

  SiPathResult path;
  path.lambdas = lambdas;
  path.fits.reserve(lambdas.size());
  SiConfig config = base;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    config.lambda = lambdas[i];
    path.fits.push_back(i == 0 ? si_solve(r, config)
                               : si_solve_warm(r, config, path.fits[i - 1].y));
  }
  return path;
}

arma::mat discretize_predictions(const arma::mat& predictions,
                                 const RatingScale& scale) {
  arma::mat out(predictions.n_rows, predictions.n_cols);
  for (arma::uword idx = 0; idx < predictions.n_elem; ++idx) {
    double rounded = std::round(predictions(idx));  // half away from zero
    out(idx) = std::clamp(rounded, scale.min_value(), scale.max_value());
  }
  return out;
}

}  // namespace rdmc
