#include "rdmc/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdmc {

std::string method_family_name(MethodFamily family) {
  switch (family) {
    case MethodFamily::rdmc: return "rdmc";
    case MethodFamily::si: return "si";
    case MethodFamily::si_discretized: return "si-discretized";
    case MethodFamily::median: return "median";
    case MethodFamily::median_discretized: return "median-discretized";
    case MethodFamily::mode: return "mode";
  }
  throw std::logic_error("method_family_name: unknown family");
}

std::string method_spec_name(const MethodSpec& spec) {
  switch (spec.family) {
    case MethodFamily::rdmc:
      return "rdmc-" + loss_name(spec.loss) + "-" + stopping_name(spec.stopping);
    case MethodFamily::si:
    case MethodFamily::si_discretized:
      return method_family_name(spec.family) + "-" + stopping_name(spec.stopping);
    default:
      return method_family_name(spec.family);
  }
}

MethodSpec parse_method_spec(const std::string& name) {
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      std::size_t dash = s.find('-', pos);
      if (dash == std::string::npos) {
        parts.push_back(s.substr(pos));
        break;
      }
      parts.push_back(s.substr(pos, dash - pos));
      pos = dash + 1;
    }
    return parts;
  };
  MethodSpec spec;
  if (name == "median") {
    spec.family = MethodFamily::median;
    return spec;
  }
  if (name == "median-discretized") {
    spec.family = MethodFamily::median_discretized;
    return spec;
  }
  if (name == "mode") {
    spec.family = MethodFamily::mode;
    return spec;
  }
  std::vector<std::string> parts = split(name);
  if (!parts.empty() && parts[0] == "rdmc") {
    if (parts.size() != 3)
      throw std::invalid_argument("method '" + name +
                                  "': expected rdmc-<loss>-<stopping>");
    spec.family = MethodFamily::rdmc;
    spec.loss = parse_loss(parts[1]);
    spec.stopping = parse_stopping(parts[2]);
    return spec;
  }
  if (!parts.empty() && parts[0] == "si") {
    if (parts.size() == 2) {
      spec.family = MethodFamily::si;
      spec.stopping = parse_stopping(parts[1]);
      return spec;
    }
    if (parts.size() == 3 && parts[1] == "discretized") {
      spec.family = MethodFamily::si_discretized;
      spec.stopping = parse_stopping(parts[2]);
      return spec;
    }
    throw std::invalid_argument(
        "method '" + name + "': expected si-<stopping> or si-discretized-<stopping>");
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

namespace {

double sigma_max(const SparseRatingMatrix& centered) {
  arma::vec s;
  if (!arma::svd(s, centered.to_dense(0.0)))
    throw std::runtime_error("lambda_grid: SVD failed to converge");
  return s.empty() ? 0.0 : s.max();
}

SparseRatingMatrix mean_centered(const SparseRatingMatrix& r) {
  std::vector<double> means = column_means(r);
  std::vector<Entry> entries = r.entries();
  for (Entry& e : entries) e.value -= means[e.col];
  return SparseRatingMatrix(r.n_rows(), r.n_cols(), std::move(entries));
}

std::vector<double> grid_from_sigma(double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument(
        "lambda_grid: largest singular value is zero (all-zero matrix)");
  std::vector<double> grid(10);
  const double lo = std::log10(0.01);
  const double hi = std::log10(1.0);
  for (int i = 0; i < 10; ++i) {
    const double u = lo + (hi - lo) * static_cast<double>(i) / 9.0;
    grid[i] = std::pow(10.0, u) * sigma;
  }
  return grid;
}

int pick_winner(const std::vector<double>& mean_loss) {
  int best = 0;
  for (std::size_t i = 1; i < mean_loss.size(); ++i)
    if (mean_loss[i] < mean_loss[best]) best = static_cast<int>(i);
  return best;  // ascending scan with strict < breaks ties toward smaller lambda
}

void finalize_report(ValidationReport& report) {
  const int n_lambda = static_cast<int>(report.lambdas.size());
  report.mean_loss.assign(n_lambda, 0.0);
  for (int i = 0; i < n_lambda; ++i)
    report.mean_loss[i] = arma::mean(report.losses.col(i));
  report.selected_index = pick_winner(report.mean_loss);
  report.selected_lambda = report.lambdas[report.selected_index];
}

}  // namespace

std::vector<double> lambda_grid(const SparseRatingMatrix& centered) {
  return grid_from_sigma(sigma_max(centered));
}

ValidationReport select_lambda_rdmc(const SparseRatingMatrix& train,
                                    const RatingScale& scale, LossKind loss,
                                    Stopping stopping,
                                    const SelectionConfig& selection) {
  if (selection.replications < 1)
    throw std::invalid_argument("select_lambda: need at least one replication");
  const LossSpec loss_spec = LossSpec::make(loss, scale);
  const SolverConfig base = SolverConfig::defaults(loss_spec, stopping);

  ValidationReport report;
  report.lambdas = lambda_grid(center(train, scale).x);
  const int n_lambda = static_cast<int>(report.lambdas.size());
  report.losses.set_size(selection.replications, n_lambda);
  report.path_diagnostics.resize(selection.replications);

  for (int k = 0; k < selection.replications; ++k) {
    const MaskSplit mask = split_train_test(
        train, selection.fraction, selection.seed + static_cast<std::uint64_t>(k));
    const SparseRatingMatrix sub = mask.train_matrix(train);
    const std::vector<Entry> held_out = mask.test_entries(train);
    const CenteredMatrix cm = center(sub, scale);
    PathResult path = solve_path(cm, report.lambdas, base);
    report.path_diagnostics[k] = path.diagnostics;
    for (int i = 0; i < n_lambda; ++i) {
      double total = 0.0;
      for (const Entry& e : held_out) {
        const double prediction =
            path.solutions[i](e.row, e.col) + cm.medians[e.col];
        total += loss_value(loss_spec, e.value - prediction);
      }
      report.losses(k, i) = total / static_cast<double>(held_out.size());
    }
  }
  finalize_report(report);
  return report;
}

ValidationReport select_lambda_si(const SparseRatingMatrix& train,
                                  Stopping stopping,
                                  const SelectionConfig& selection) {
  if (selection.replications < 1)
    throw std::invalid_argument("select_lambda: need at least one replication");
  const LossSpec squared{LossKind::squared, 0.0};
  const SiConfig base = SiConfig::defaults(stopping);

  ValidationReport report;
  report.lambdas = lambda_grid(mean_centered(train));
  const int n_lambda = static_cast<int>(report.lambdas.size());
  std::vector<double> descending(report.lambdas.rbegin(), report.lambdas.rend());
  report.losses.set_size(selection.replications, n_lambda);
  report.path_diagnostics.resize(selection.replications);

  for (int k = 0; k < selection.replications; ++k) {
    const MaskSplit mask = split_train_test(
        train, selection.fraction, selection.seed + static_cast<std::uint64_t>(k));
    const SparseRatingMatrix sub = mask.train_matrix(train);
    const std::vector<Entry> held_out = mask.test_entries(train);
    SiPathResult path = si_solve_path(sub, descending, base);
    report.path_diagnostics[k].resize(n_lambda);
    for (int i = 0; i < n_lambda; ++i) {
      const SiFit& fit = path.fits[n_lambda - 1 - i];  // map back to ascending
      report.path_diagnostics[k][i] = fit.diagnostics;
      double total = 0.0;
      for (const Entry& e : held_out)
        total += loss_value(squared, e.value - fit.predictions(e.row, e.col));
      report.losses(k, i) = total / static_cast<double>(held_out.size());
    }
  }
  finalize_report(report);
  return report;
}

RdmcFit fit_rdmc_at(const SparseRatingMatrix& train, const RatingScale& scale,
                    LossKind loss, Stopping stopping, double lambda) {
  const LossSpec loss_spec = LossSpec::make(loss, scale);
  SolverConfig config = SolverConfig::defaults(loss_spec, stopping);
  config.lambda = lambda;
  const CenteredMatrix cm = center(train, scale);
  SolveResult result = solve(cm, config);
  RdmcFit fit;
  fit.lambda = lambda;
  fit.completion = assemble_completion(result.l, cm);
  fit.diagnostics = result.diagnostics;
  return fit;
}

RdmcFit fit_rdmc(const SparseRatingMatrix& train, const RatingScale& scale,
                 LossKind loss, Stopping stopping,
                 const SelectionConfig& selection) {
  ValidationReport report =
      select_lambda_rdmc(train, scale, loss, stopping, selection);
  RdmcFit fit =
      fit_rdmc_at(train, scale, loss, stopping, report.selected_lambda);
  fit.report = std::move(report);
  return fit;
}

SiMethodFit fit_si_at(const SparseRatingMatrix& train, Stopping stopping,
                      double lambda) {
  if (lambda < 0.0)
    throw std::invalid_argument("fit_si_at: lambda must be non-negative");
  const SiConfig base = SiConfig::defaults(stopping);
  // Reach the requested lambda through the canonical descending warm-start
  // path: all grid values above lambda first, then lambda itself.
  const double sigma = sigma_max(mean_centered(train));
  std::vector<double> descending;
  if (sigma > 0.0) {
    std::vector<double> grid = grid_from_sigma(sigma);
    for (auto it = grid.rbegin(); it != grid.rend(); ++it)
      if (*it > lambda) descending.push_back(*it);
  }
  descending.push_back(lambda);
  SiPathResult path = si_solve_path(train, descending, base);
  SiMethodFit fit;
  fit.lambda = lambda;
  fit.predictions = std::move(path.fits.back().predictions);
  fit.diagnostics = path.fits.back().diagnostics;
  return fit;
}

SiMethodFit fit_si(const SparseRatingMatrix& train, Stopping stopping,
                   const SelectionConfig& selection) {
  ValidationReport report = select_lambda_si(train, stopping, selection);
  SiMethodFit fit = fit_si_at(train, stopping, report.selected_lambda);
  fit.report = std::move(report);
  return fit;
}

}  // namespace rdmc
