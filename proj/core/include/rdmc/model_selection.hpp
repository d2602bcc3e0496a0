#pragma once

#include <armadillo>
#include <cstdint>
#include <string>
#include <vector>

#include "rdmc/loss.hpp"
#include "rdmc/rating_matrix.hpp"
#include "rdmc/soft_impute.hpp"
#include "rdmc/solver.hpp"

namespace rdmc {

enum class MethodFamily { rdmc, si, si_discretized, median, median_discretized, mode };

// A fully specified method: family plus, where applicable, the fitting loss
// (RDMC) and the stopping criterion (RDMC and SI variants).
struct MethodSpec {
  MethodFamily family = MethodFamily::rdmc;
  LossKind loss = LossKind::pseudo_huber;
  Stopping stopping = Stopping::strict;
};

// Canonical method-family names: "rdmc", "si", "si-discretized", "median",
// "median-discretized", "mode".
std::string method_family_name(MethodFamily family);
// Full spec string, e.g. "rdmc-phuber-strict", "si-liberal", "median".
std::string method_spec_name(const MethodSpec& spec);
// Parses the full spec string; loss/stopping segments are required for rdmc
// ("rdmc-<loss>-<stopping>"), the stopping segment for si variants.
MethodSpec parse_method_spec(const std::string& name);

// Repeated-holdout settings for selecting lambda. Replication k masks a
// fraction of the training matrix's observed cells with seed `seed + k`.
struct SelectionConfig {
  int replications = 5;
  double fraction = 0.1;
  std::uint64_t seed = 0;
};

// Per-lambda validation losses (rows = holdout replications) and the winner.
// Ties on the mean go to the smaller lambda. path_diagnostics[k][i] is the
// solver record for replication k at lambdas[i].
struct ValidationReport {
  std::vector<double> lambdas;  // ascending
  arma::mat losses;             // replications x lambdas, mean loss per cell
  std::vector<double> mean_loss;
  int selected_index = -1;
  double selected_lambda = 0.0;
  std::vector<std::vector<SolverDiagnostics>> path_diagnostics;
};

// Ten log-spaced multipliers 10^u for u equispaced in [log10(0.01), log10(1)],
// scaled by the largest singular value of the zero-filled centered training
// matrix. Throws if that singular value is zero.
std::vector<double> lambda_grid(const SparseRatingMatrix& centered);

// Repeated-holdout selection. RDMC scores its discrete completions with its
// own fitting loss on the original scale; SI scores continuous predictions
// with the squared loss. Both score only the masked entries.
ValidationReport select_lambda_rdmc(const SparseRatingMatrix& train,
                                    const RatingScale& scale, LossKind loss,
                                    Stopping stopping,
                                    const SelectionConfig& selection);
ValidationReport select_lambda_si(const SparseRatingMatrix& train,
                                  Stopping stopping,
                                  const SelectionConfig& selection);

struct RdmcFit {
  double lambda = 0.0;
  arma::mat completion;  // original scale, discrete
  SolverDiagnostics diagnostics;
  ValidationReport report;  // empty when fitted at a fixed lambda
};

struct SiMethodFit {
  double lambda = 0.0;
  arma::mat predictions;  // original scale, continuous
  SolverDiagnostics diagnostics;
  ValidationReport report;
};

// Selection followed by a refit on the full training matrix at the winner.
RdmcFit fit_rdmc(const SparseRatingMatrix& train, const RatingScale& scale,
                 LossKind loss, Stopping stopping,
                 const SelectionConfig& selection);
SiMethodFit fit_si(const SparseRatingMatrix& train, Stopping stopping,
                   const SelectionConfig& selection);

// Fit at a fixed lambda (no selection). RDMC runs a single cold solve; SI
// runs its descending warm-start path down to the requested lambda, which is
// how Soft-Impute is meant to reach small penalties.
RdmcFit fit_rdmc_at(const SparseRatingMatrix& train, const RatingScale& scale,
                    LossKind loss, Stopping stopping, double lambda);
SiMethodFit fit_si_at(const SparseRatingMatrix& train, Stopping stopping,
                      double lambda);

}  // namespace rdmc
