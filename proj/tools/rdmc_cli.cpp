// Command-line front end: simulation generation, single fits, profile-attack
// forging, prediction scoring, full experiment runs, and record summaries.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdmc/attacks.hpp"
#include "rdmc/baselines.hpp"
#include "rdmc/config.hpp"
#include "rdmc/evaluation.hpp"
#include "rdmc/experiment.hpp"
#include "rdmc/io.hpp"
#include "rdmc/model_selection.hpp"
#include "rdmc/rng.hpp"
#include "rdmc/simulation.hpp"
#include "rdmc/soft_impute.hpp"

namespace {

using nlohmann::json;

struct GlobalOptions {
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = all available cores
  std::string config_path;
  std::string out_dir = "out";
};

int resolved_threads(const GlobalOptions& g) {
  if (g.threads > 0) return g.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void add_global_options(CLI::App* cmd, GlobalOptions& g) {
  cmd->add_option("--seed", g.seed, "Base random seed");
  cmd->add_option("--threads", g.threads,
                  "Worker threads for replications (0 = all cores)");
  cmd->add_option("--config", g.config_path, "Configuration file");
  cmd->add_option("--out", g.out_dir, "Output directory");
}

void write_meta(const std::string& out_dir, const json& meta) {
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir + "/meta.json");
  if (!out) throw std::runtime_error("cannot write " + out_dir + "/meta.json");
  out << meta.dump(2) << "\n";
}

struct DataOptions {
  std::string path;
  std::string format = "movielens-udata";
  int categories = 5;
  int min_ratings = 0;
};

void add_data_options(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--data", d.path, "Ratings file")->required();
  cmd->add_option("--format", d.format, "movielens-udata or long-csv")
      ->check(CLI::IsMember({"movielens-udata", "long-csv"}));
  cmd->add_option("--categories", d.categories,
                  "Number of rating categories (long-csv only)");
  cmd->add_option("--min-ratings", d.min_ratings,
                  "Drop columns with fewer observed ratings");
}

struct LoadedData {
  rdmc::SparseRatingMatrix matrix;
  rdmc::RatingScale scale;
  std::vector<int> kept_rows;  // post-filter index -> original index
  std::vector<int> kept_cols;
};

LoadedData load_data(const DataOptions& d) {
  rdmc::LoadedMatrix loaded =
      d.format == "movielens-udata"
          ? rdmc::read_movielens(d.path)
          : rdmc::read_long_csv(d.path, d.categories);
  LoadedData data{std::move(loaded.matrix), loaded.scale, {}, {}};
  if (d.min_ratings > 0) {
    rdmc::FilterResult filtered =
        rdmc::filter_min_ratings(data.matrix, d.min_ratings);
    data.matrix = std::move(filtered.matrix);
    data.kept_rows = std::move(filtered.kept_rows);
    data.kept_cols = std::move(filtered.kept_cols);
  }
  return data;
}

json data_meta(const DataOptions& d, const LoadedData& data) {
  json meta;
  meta["data"] = d.path;
  meta["format"] = d.format;
  meta["categories"] = data.scale.categories;
  meta["min_ratings"] = d.min_ratings;
  meta["rows"] = data.matrix.n_rows();
  meta["cols"] = data.matrix.n_cols();
  meta["entries"] = data.matrix.nnz();
  if (!data.kept_rows.empty()) meta["kept_rows"] = data.kept_rows;
  if (!data.kept_cols.empty()) meta["kept_cols"] = data.kept_cols;
  return meta;
}

std::vector<rdmc::TimingRecord> fit_timings(
    const std::string& method, const rdmc::ValidationReport& report,
    const rdmc::SolverDiagnostics& refit) {
  std::vector<rdmc::TimingRecord> timings;
  for (std::size_t k = 0; k < report.path_diagnostics.size(); ++k) {
    for (const rdmc::SolverDiagnostics& d : report.path_diagnostics[k]) {
      rdmc::TimingRecord t;
      t.method = method;
      t.phase = "selection";
      t.holdout = static_cast<int>(k);
      t.lambda = d.lambda;
      t.iterations = d.iterations;
      t.converged = d.converged;
      t.final_loss = d.final_loss;
      t.wall_time_ms = d.wall_time_ms;
      timings.push_back(std::move(t));
    }
  }
  rdmc::TimingRecord t;
  t.method = method;
  t.phase = "refit";
  t.holdout = -1;
  t.lambda = refit.lambda;
  t.iterations = refit.iterations;
  t.converged = refit.converged;
  t.final_loss = refit.final_loss;
  t.wall_time_ms = refit.wall_time_ms;
  timings.push_back(std::move(t));
  return timings;
}

json report_meta(const rdmc::ValidationReport& report) {
  json r;
  r["lambdas"] = report.lambdas;
  r["mean_validation_loss"] = report.mean_loss;
  r["selected_index"] = report.selected_index;
  r["selected_lambda"] = report.selected_lambda;
  return r;
}

// ---------------------------------------------------------------- simulate

int run_simulate(const GlobalOptions& g, const std::string& kind, int n, int p,
                 int rank, int categories, const std::string& missingness,
                 double mcar_fraction, int constructs, int items_per_construct,
                 double abandonment, double careless) {
  rdmc::SimTruth truth;
  json meta;
  meta["command"] = "simulate";
  meta["kind"] = kind;
  meta["seed"] = g.seed;
  if (kind == "recommender-sim") {
    rdmc::RecommenderSimConfig config;
    config.n = n;
    config.p = p;
    config.rank = rank;
    config.categories = categories;
    config.seed = g.seed;
    truth = rdmc::gen_recommender(config);
    const rdmc::Missingness m = rdmc::parse_missingness(missingness);
    if (m == rdmc::Missingness::mnar)
      rdmc::inject_mnar(truth, rdmc::mix_seed(g.seed, 2));
    else
      rdmc::inject_mcar(truth, mcar_fraction, rdmc::mix_seed(g.seed, 2));
    meta["missingness"] = missingness;
    if (m == rdmc::Missingness::mcar) meta["mcar_fraction"] = mcar_fraction;
    meta["rank"] = rank;
  } else {
    rdmc::SurveySimConfig config;
    config.n = n;
    config.constructs = constructs;
    config.items_per_construct = items_per_construct;
    config.categories = categories;
    config.seed = g.seed;
    truth = rdmc::gen_survey(config);
    rdmc::inject_abandonment(truth, abandonment, rdmc::mix_seed(g.seed, 2));
    rdmc::inject_careless(truth, careless, rdmc::mix_seed(g.seed, 4));
    meta["constructs"] = constructs;
    meta["items_per_construct"] = items_per_construct;
    meta["abandonment"] = abandonment;
    meta["careless"] = careless;
    meta["careless_rows"] = truth.careless_rows;
    meta["item_permutation"] = truth.item_permutation;
    meta["reversed_items"] = truth.reversed;
  }
  meta["rows"] = truth.r_full.n_rows;
  meta["cols"] = truth.r_full.n_cols;
  meta["categories"] = truth.scale.categories;

  const rdmc::SparseRatingMatrix observed = truth.make_observed();
  meta["observed_entries"] = observed.nnz();
  std::filesystem::create_directories(g.out_dir);
  rdmc::write_long_csv(g.out_dir + "/observed.csv", observed);
  rdmc::write_dense_csv(g.out_dir + "/truth.csv",
                        arma::conv_to<arma::mat>::from(truth.r_full));
  write_meta(g.out_dir, meta);
  std::cout << "simulated " << truth.r_full.n_rows << "x" << truth.r_full.n_cols
            << " with " << observed.nnz() << " observed entries -> "
            << g.out_dir << "\n";
  return 0;
}

// --------------------------------------------------------------------- fit

int run_fit(const GlobalOptions& g, const DataOptions& d,
            const std::string& method_arg, const std::string& loss_arg,
            const std::string& stopping_arg, std::optional<double> lambda,
            int holdout_reps, double holdout_fraction, bool dump_matrices) {
  // `--method rdmc --loss phuber --stopping strict` and the one-string form
  // `--method rdmc-phuber-strict` are both accepted.
  std::string method_name = method_arg;
  if (method_arg == "rdmc")
    method_name = "rdmc-" + loss_arg + "-" + stopping_arg;
  else if (method_arg == "si" || method_arg == "si-discretized")
    method_name = method_arg + "-" + stopping_arg;
  const rdmc::MethodSpec method = rdmc::parse_method_spec(method_name);

  LoadedData data = load_data(d);
  json meta = data_meta(d, data);
  meta["command"] = "fit";
  meta["method"] = rdmc::method_spec_name(method);
  meta["seed"] = g.seed;

  const rdmc::SelectionConfig selection{holdout_reps, holdout_fraction, g.seed};
  arma::mat predictions;
  std::vector<rdmc::TimingRecord> timings;

  switch (method.family) {
    case rdmc::MethodFamily::rdmc: {
      rdmc::RdmcFit fit =
          lambda ? rdmc::fit_rdmc_at(data.matrix, data.scale, method.loss,
                                     method.stopping, *lambda)
                 : rdmc::fit_rdmc(data.matrix, data.scale, method.loss,
                                  method.stopping, selection);
      predictions = std::move(fit.completion);
      timings = fit_timings(method_name, fit.report, fit.diagnostics);
      meta["lambda"] = fit.lambda;
      meta["iterations"] = fit.diagnostics.iterations;
      meta["converged"] = fit.diagnostics.converged;
      meta["wall_time_ms"] = fit.diagnostics.wall_time_ms;
      if (!lambda) meta["selection"] = report_meta(fit.report);
      break;
    }
    case rdmc::MethodFamily::si:
    case rdmc::MethodFamily::si_discretized: {
      rdmc::SiMethodFit fit =
          lambda ? rdmc::fit_si_at(data.matrix, method.stopping, *lambda)
                 : rdmc::fit_si(data.matrix, method.stopping, selection);
      predictions = method.family == rdmc::MethodFamily::si
                        ? std::move(fit.predictions)
                        : rdmc::discretize_predictions(fit.predictions,
                                                       data.scale);
      timings = fit_timings(method_name, fit.report, fit.diagnostics);
      meta["lambda"] = fit.lambda;
      meta["iterations"] = fit.diagnostics.iterations;
      meta["converged"] = fit.diagnostics.converged;
      meta["wall_time_ms"] = fit.diagnostics.wall_time_ms;
      if (!lambda) meta["selection"] = report_meta(fit.report);
      break;
    }
    case rdmc::MethodFamily::median:
      predictions = rdmc::median_impute(data.matrix);
      break;
    case rdmc::MethodFamily::median_discretized:
      predictions =
          rdmc::median_impute_discretized(data.matrix, data.scale, g.seed);
      break;
    case rdmc::MethodFamily::mode:
      predictions = rdmc::mode_impute(data.matrix, data.scale, g.seed);
      break;
  }

  std::filesystem::create_directories(g.out_dir);
  if (!timings.empty())
    rdmc::write_timings_csv(g.out_dir + "/timings.csv", timings);
  if (dump_matrices) {
    std::filesystem::create_directories(g.out_dir + "/matrices");
    rdmc::write_dense_csv(g.out_dir + "/matrices/predictions.csv", predictions);
  }
  write_meta(g.out_dir, meta);
  std::cout << "fitted " << method_name;
  if (meta.contains("lambda"))
    std::cout << " (lambda=" << meta["lambda"].get<double>() << ")";
  std::cout << " -> " << g.out_dir << "\n";
  return 0;
}

// ------------------------------------------------------------------ attack

int run_attack(const GlobalOptions& g, const DataOptions& d,
               const std::string& scheme, double epsilon, int target_flag) {
  LoadedData data = load_data(d);
  rdmc::AttackSpec spec;
  spec.scheme = rdmc::parse_attack(scheme);
  spec.epsilon = epsilon;
  spec.seed = g.seed;
  const int target =
      target_flag >= 0 ? target_flag : rdmc::select_target_empirical(data.matrix);
  const rdmc::AttackResult result =
      rdmc::forge_profiles(data.matrix, data.scale, target, spec);

  json meta = data_meta(d, data);
  meta["command"] = "attack";
  meta["scheme"] = scheme;
  meta["epsilon"] = epsilon;
  meta["seed"] = g.seed;
  meta["target_column"] = result.target;
  meta["fake_rows"] = result.fake_rows;
  meta["filled_columns"] = result.filled_columns;

  std::filesystem::create_directories(g.out_dir);
  rdmc::write_long_csv(g.out_dir + "/augmented.csv", result.augmented);
  write_meta(g.out_dir, meta);
  std::cout << "forged " << result.fake_rows << " profiles against column "
            << result.target << " -> " << g.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------- evaluate

int run_evaluate(const GlobalOptions& g, const std::string& metric,
                 const std::string& predictions_path,
                 const std::string& truth_path, int categories,
                 const std::string& before_path, const std::string& after_path,
                 int target_column, const std::string& missing_in_path) {
  json meta;
  meta["command"] = "evaluate";
  meta["metric"] = metric;
  double value = 0.0;
  if (metric == "mae") {
    if (predictions_path.empty() || truth_path.empty())
      throw CLI::ValidationError("evaluate",
                                 "mae needs --predictions and --truth");
    const arma::mat predictions = rdmc::read_dense_csv(predictions_path);
    const rdmc::LoadedMatrix truth =
        rdmc::read_long_csv(truth_path, categories);
    value = rdmc::mae(predictions, truth.matrix.entries());
    meta["predictions"] = predictions_path;
    meta["truth"] = truth_path;
    meta["cells"] = truth.matrix.nnz();
  } else {
    if (before_path.empty() || after_path.empty() || target_column < 0 ||
        missing_in_path.empty())
      throw CLI::ValidationError("evaluate",
                                 "mps needs --before, --after, "
                                 "--target-column and --missing-in");
    const arma::mat before = rdmc::read_dense_csv(before_path);
    const arma::mat after = rdmc::read_dense_csv(after_path);
    const rdmc::LoadedMatrix ref =
        rdmc::read_long_csv(missing_in_path, categories);
    std::vector<int> rows;
    for (int i = 0; i < ref.matrix.n_rows(); ++i)
      if (!ref.matrix.has(i, target_column)) rows.push_back(i);
    value = rdmc::mean_prediction_shift(before, after, rows, target_column);
    meta["before"] = before_path;
    meta["after"] = after_path;
    meta["target_column"] = target_column;
    meta["cells"] = rows.size();
  }
  meta["value"] = value;
  write_meta(g.out_dir, meta);
  std::cout << metric << " = " << value << "\n";
  return 0;
}

// -------------------------------------------------------------- experiment

int run_experiment_cmd(const GlobalOptions& g, bool seed_given,
                       bool threads_given, bool dry_run) {
  if (g.config_path.empty())
    throw CLI::ValidationError("experiment", "needs --config <file>");
  const rdmc::Config raw = rdmc::Config::parse_file(g.config_path);
  rdmc::ExperimentConfig config = rdmc::ExperimentConfig::from_config(raw);
  if (seed_given) config.seed = g.seed;
  if (threads_given || config.threads <= 1) config.threads = resolved_threads(g);

  if (dry_run) {
    config.validate();
    std::cout << "config ok: " << rdmc::experiment_kind_name(config.kind)
              << ", " << config.replications << " replication(s), "
              << config.methods.size() << " method(s)";
    if (!config.attacks.empty())
      std::cout << ", " << config.attacks.size() << " attack scheme(s) x "
                << config.attack_epsilons.size() << " size(s)";
    std::cout << ", seed " << config.seed << "\n";
    return 0;
  }

  // Replication-level workers already saturate the machine; keep the BLAS
  // inside each worker single-threaded so they do not multiply.
  if (config.threads > 1) setenv("OPENBLAS_NUM_THREADS", "1", 1);

  const rdmc::ExperimentResult result = rdmc::run_experiment(config);
  rdmc::write_experiment_outputs(g.out_dir, result);
  const std::vector<rdmc::SummaryRow> summary = rdmc::summarize(result.records);
  rdmc::write_summary_csv(g.out_dir + "/summary.csv", summary);

  json meta;
  meta["command"] = "experiment";
  meta["config"] = g.config_path;
  meta["kind"] = rdmc::experiment_kind_name(config.kind);
  meta["seed"] = config.seed;
  meta["threads"] = config.threads;
  meta["replications"] = config.replications;
  meta["records"] = result.records.size();
  meta["failures"] = result.failures;
  write_meta(g.out_dir, meta);

  std::cout << "experiment complete: " << result.records.size()
            << " records from " << config.replications << " replications";
  if (!result.failures.empty())
    std::cout << " (" << result.failures.size() << " failed)";
  std::cout << " -> " << g.out_dir << "\n";
  return 0;
}

// --------------------------------------------------------------- summarize

int run_summarize(const GlobalOptions& g, const std::string& records_path) {
  const std::vector<rdmc::ResultRecord> records =
      rdmc::read_records_csv(records_path);
  const std::vector<rdmc::SummaryRow> summary = rdmc::summarize(records);
  std::filesystem::create_directories(g.out_dir);
  rdmc::write_summary_csv(g.out_dir + "/summary.csv", summary);
  for (const rdmc::SummaryRow& row : summary) {
    std::cout << row.method;
    if (!row.attack.empty() && row.attack != "none")
      std::cout << " " << row.attack << " eps=" << row.epsilon;
    std::cout << " " << row.metric << ": median=" << row.median
              << " q1=" << row.q1 << " q3=" << row.q3 << " n=" << row.count
              << "\n";
  }
  std::cout << "summary -> " << g.out_dir << "/summary.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust discrete matrix completion toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rdmc 1.0.0");

  GlobalOptions g;

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a simulated matrix");
  add_global_options(simulate, g);
  std::string sim_kind = "recommender-sim";
  int sim_n = 300, sim_p = 200, sim_rank = 20, sim_categories = -1;
  std::string sim_missingness = "mnar";
  double sim_mcar_fraction = 0.7;
  int sim_constructs = 10, sim_items = 8;
  double sim_abandonment = 0.2, sim_careless = 0.2;
  simulate->add_option("--kind", sim_kind, "recommender-sim or survey-sim")
      ->check(CLI::IsMember({"recommender-sim", "survey-sim"}));
  simulate->add_option("--n", sim_n, "Rows (users/respondents)");
  simulate->add_option("--p", sim_p, "Columns (items), recommender only");
  simulate->add_option("--rank", sim_rank, "Latent rank, recommender only");
  simulate->add_option("--categories", sim_categories,
                       "Rating categories (default 10 recommender, 7 survey)");
  simulate->add_option("--missingness", sim_missingness, "mnar or mcar")
      ->check(CLI::IsMember({"mnar", "mcar"}));
  simulate->add_option("--mcar-fraction", sim_mcar_fraction,
                       "Fraction of cells removed under mcar");
  simulate->add_option("--constructs", sim_constructs, "Survey constructs");
  simulate->add_option("--items-per-construct", sim_items,
                       "Items per construct");
  simulate->add_option("--abandonment", sim_abandonment,
                       "Fraction of abandoning respondents");
  simulate->add_option("--careless", sim_careless,
                       "Fraction of careless respondents");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit one method on a ratings file");
  add_global_options(fit, g);
  DataOptions fit_data;
  add_data_options(fit, fit_data);
  std::string fit_method, fit_loss = "phuber", fit_stopping = "strict";
  double fit_lambda = -1.0;
  int fit_holdout_reps = 5;
  double fit_holdout_fraction = 0.1;
  bool fit_dump = false;
  fit->add_option("--method", fit_method,
                  "rdmc|si|si-discretized|median|median-discretized|mode, or "
                  "a full name like rdmc-phuber-strict")
      ->required();
  fit->add_option("--loss", fit_loss,
                  "phuber|absolute|truncated|squared (rdmc only)");
  fit->add_option("--stopping", fit_stopping, "strict|liberal")
      ->check(CLI::IsMember({"strict", "liberal"}));
  fit->add_option("--lambda", fit_lambda,
                  "Fixed penalty (skips holdout selection)");
  fit->add_option("--holdout-reps", fit_holdout_reps,
                  "Holdout replications for selection");
  fit->add_option("--holdout-fraction", fit_holdout_fraction,
                  "Fraction of observed cells masked per holdout");
  fit->add_flag("--dump-matrices", fit_dump,
                "Write the dense prediction matrix");

  // attack
  auto* attack = app.add_subcommand("attack", "Forge attack profiles");
  add_global_options(attack, g);
  DataOptions attack_data;
  add_data_options(attack, attack_data);
  std::string attack_scheme;
  double attack_epsilon = 0.2;
  int attack_target = -1;
  attack->add_option("--scheme", attack_scheme,
                     "average|reverse-bandwagon|love-hate")
      ->required()
      ->check(CLI::IsMember({"average", "reverse-bandwagon", "love-hate"}));
  attack->add_option("--epsilon", attack_epsilon,
                     "Fake profiles per observed target rating");
  attack->add_option("--target", attack_target,
                     "Target column (default: most-rated popular column)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions");
  add_global_options(evaluate, g);
  std::string eval_metric = "mae";
  std::string eval_predictions, eval_truth, eval_before, eval_after,
      eval_missing_in;
  int eval_categories = 5, eval_target = -1;
  evaluate->add_option("--metric", eval_metric, "mae or mps")
      ->check(CLI::IsMember({"mae", "mps"}));
  evaluate->add_option("--predictions", eval_predictions,
                       "Dense prediction matrix (csv)");
  evaluate->add_option("--truth", eval_truth, "Held-out truth (long csv)");
  evaluate->add_option("--categories", eval_categories, "Rating categories");
  evaluate->add_option("--before", eval_before,
                       "Pre-attack predictions (dense csv)");
  evaluate->add_option("--after", eval_after,
                       "Post-attack predictions (dense csv)");
  evaluate->add_option("--target-column", eval_target, "Attacked column");
  evaluate->add_option("--missing-in", eval_missing_in,
                       "Ratings file defining which rows were unrated");

  // experiment
  auto* experiment =
      app.add_subcommand("experiment", "Run a configured experiment");
  add_global_options(experiment, g);
  bool experiment_dry_run = false;
  experiment->add_flag("--dry-run", experiment_dry_run,
                       "Parse and validate the config, print the plan, exit");

  // summarize
  auto* summarize = app.add_subcommand("summarize", "Summarize a records file");
  add_global_options(summarize, g);
  std::string summarize_records;
  summarize->add_option("--records", summarize_records, "records.csv path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      if (sim_categories < 0)
        sim_categories = sim_kind == "survey-sim" ? 7 : 10;
      return run_simulate(g, sim_kind, sim_n, sim_p, sim_rank, sim_categories,
                          sim_missingness, sim_mcar_fraction, sim_constructs,
                          sim_items, sim_abandonment, sim_careless);
    }
    if (fit->parsed()) {
      std::optional<double> lambda;
      if (fit->count("--lambda") > 0) lambda = fit_lambda;
      return run_fit(g, fit_data, fit_method, fit_loss, fit_stopping, lambda,
                     fit_holdout_reps, fit_holdout_fraction, fit_dump);
    }
    if (attack->parsed())
      return run_attack(g, attack_data, attack_scheme, attack_epsilon,
                        attack_target);
    if (evaluate->parsed())
      return run_evaluate(g, eval_metric, eval_predictions, eval_truth,
                          eval_categories, eval_before, eval_after, eval_target,
                          eval_missing_in);
    if (experiment->parsed())
      return run_experiment_cmd(g, experiment->count("--seed") > 0,
                                experiment->count("--threads") > 0,
                                experiment_dry_run);
    if (summarize->parsed()) return run_summarize(g, summarize_records);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
