#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdmc/attacks.hpp"
#include "rdmc/config.hpp"
#include "rdmc/evaluation.hpp"
#include "rdmc/model_selection.hpp"
#include "rdmc/simulation.hpp"

namespace rdmc {

enum class ExperimentKind { recommender, survey, dataset };

std::string experiment_kind_name(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

// A complete experiment: data source, methods, optional attack grid, and the
// lambda-selection settings shared by all penalized methods.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::recommender;
  std::uint64_t seed = 1;
  int replications = 1;
  std::vector<MethodSpec> methods;
  bool compute_mae = true;

  std::vector<AttackScheme> attacks;  // empty = no attack phase
  std::vector<double> attack_epsilons = {0.2};
  // Reuse each method's pre-attack lambda for the post-attack fit instead of
  // re-running selection on the contaminated matrix.
  bool attack_reuse_lambda = false;
  // Mode imputation always predicts the column mode, so an attack shifts its
  // predictions only through the mode itself; it is excluded from attack
  // comparisons unless explicitly requested.
  bool include_mode_under_attack = false;

  int holdout_replications = 5;
  double holdout_fraction = 0.1;
  int threads = 1;

  // recommender-sim
  int n = 300;
  int p = 200;
  int rank = 20;
  int categories = 10;
  Missingness missingness = Missingness::mnar;
  double mcar_fraction = 0.7;

  // survey-sim
  int constructs = 10;
  int items_per_construct = 8;
  double abandonment = 0.2;
  double careless = 0.2;

  // dataset
  std::string data_path;
  std::string data_format = "movielens-udata";  // or "long-csv"
  int min_ratings = 0;
  double test_fraction = 0.2;

  static ExperimentConfig from_config(const Config& raw);
  void validate() const;
};

struct ExperimentResult {
  std::vector<ResultRecord> records;
  std::vector<TimingRecord> timings;
  std::vector<std::string> failures;  // one message per failed replication
};

// Run every replication: generate or load data, inject missingness (or split
// off a test set), fit the configured methods, score MAE on the evaluation
// cells and, for each configured attack scheme and size, forge profiles and
// score the mean prediction shift of the target column. Replication r is
// seeded with seed + r throughout; failures are collected and the run aborts
// if more than 10% of replications fail.
ExperimentResult run_experiment(const ExperimentConfig& config);

// records.csv and timings.csv under the given directory (created if needed).
void write_experiment_outputs(const std::string& out_dir,
                              const ExperimentResult& result);

}  // namespace rdmc
