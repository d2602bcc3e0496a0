#include "rdmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>

#include "rdmc/baselines.hpp"
#include "rdmc/io.hpp"
#include "rdmc/rng.hpp"
#include "rdmc/soft_impute.hpp"

namespace rdmc {

std::string experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::recommender: return "recommender-sim";
    case ExperimentKind::survey: return "survey-sim";
    case ExperimentKind::dataset: return "dataset";
  }
  throw std::logic_error("experiment_kind_name: unknown kind");
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "recommender-sim") return ExperimentKind::recommender;
  if (name == "survey-sim") return ExperimentKind::survey;
  if (name == "dataset") return ExperimentKind::dataset;
  throw std::invalid_argument(
      "unknown experiment kind '" + name +
      "' (expected recommender-sim|survey-sim|dataset)");
}

ExperimentConfig ExperimentConfig::from_config(const Config& raw) {
  ExperimentConfig config;
  config.kind = parse_experiment_kind(raw.get_string("kind"));
  config.seed = raw.get_uint64("seed", 1);
  config.replications = raw.get_int("replications", 1);
  for (const std::string& name : raw.get_list("methods"))
    config.methods.push_back(parse_method_spec(name));
  config.compute_mae = raw.get_bool("compute_mae", true);
  if (raw.has("attacks"))
    for (const std::string& name : raw.get_list("attacks"))
      config.attacks.push_back(parse_attack(name));
  if (raw.has("attack_epsilons"))
    config.attack_epsilons = raw.get_double_list("attack_epsilons");
  config.attack_reuse_lambda = raw.get_bool("attack_reuse_lambda", false);
  config.include_mode_under_attack =
      raw.get_bool("include_mode_under_attack", false);
  config.holdout_replications = raw.get_int("holdout_replications", 5);
  config.holdout_fraction = raw.get_double("holdout_fraction", 0.1);
  config.threads = raw.get_int("threads", 1);

  switch (config.kind) {
    case ExperimentKind::recommender:
      config.n = raw.get_int("n", 300);
      config.p = raw.get_int("p", 200);
      config.rank = raw.get_int("rank", 20);
      config.categories = raw.get_int("categories", 10);
      config.missingness = parse_missingness(raw.get_string("missingness", "mnar"));
      config.mcar_fraction = raw.get_double("mcar_fraction", 0.7);
      break;
    case ExperimentKind::survey:
      config.n = raw.get_int("n", 300);
      config.constructs = raw.get_int("constructs", 10);
      config.items_per_construct = raw.get_int("items_per_construct", 8);
      config.categories = raw.get_int("categories", 7);
      config.abandonment = raw.get_double("abandonment", 0.2);
      config.careless = raw.get_double("careless", 0.2);
      break;
    case ExperimentKind::dataset:
      config.data_path = raw.get_string("data");
      config.data_format = raw.get_string("format", "movielens-udata");
      config.min_ratings = raw.get_int("min_ratings", 0);
      config.test_fraction = raw.get_double("test_fraction", 0.2);
      config.categories = raw.get_int("categories", 5);
      break;
  }
  raw.reject_unknown_keys();
  config.validate();
  return config;
}

void ExperimentConfig::validate() const {
  if (replications < 1)
    throw std::invalid_argument("experiment: replications must be >= 1");
  if (methods.empty())
    throw std::invalid_argument("experiment: no methods configured");
  if (threads < 1)
    throw std::invalid_argument("experiment: threads must be >= 1");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
    throw std::invalid_argument("experiment: holdout_fraction must be in (0, 1)");
  if (holdout_replications < 1)
    throw std::invalid_argument("experiment: holdout_replications must be >= 1");
  for (AttackScheme scheme : attacks)
    if (scheme == AttackScheme::none)
      throw std::invalid_argument(
          "experiment: list only real attack schemes (omit 'none')");
  if (!attacks.empty()) {
    if (kind == ExperimentKind::survey)
      throw std::invalid_argument("experiment: attacks apply to rating data, "
                                  "not survey simulations");
    if (attack_epsilons.empty())
      throw std::invalid_argument("experiment: attacks configured without sizes");
    for (double eps : attack_epsilons)
      if (!(eps > 0.0))
        throw std::invalid_argument("experiment: attack sizes must be positive");
  }
  if (kind == ExperimentKind::dataset) {
    if (data_path.empty())
      throw std::invalid_argument("experiment: dataset kind needs 'data'");
    if (data_format != "movielens-udata" && data_format != "long-csv")
      throw std::invalid_argument("experiment: format must be movielens-udata|long-csv");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
      throw std::invalid_argument("experiment: test_fraction must be in (0, 1)");
  }
  if (!compute_mae && attacks.empty())
    throw std::invalid_argument("experiment: nothing to compute");
}

namespace {

// Seed-stream tags for the stages inside one replication.
constexpr std::uint64_t kTagGenerate = 1;
constexpr std::uint64_t kTagMissingness = 2;
constexpr std::uint64_t kTagSelection = 3;
constexpr std::uint64_t kTagCareless = 4;
constexpr std::uint64_t kTagBaseline = 5;
constexpr std::uint64_t kTagSplit = 6;
constexpr std::uint64_t kTagAttackBase = 64;

// A fitted method's full prediction matrix plus the fields recorded with it.
struct MethodOutput {
  arma::mat predictions;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double wall_time_ms = 0.0;
};

struct RepContext {
  const ExperimentConfig& config;
  int replication;
  std::vector<ResultRecord> records;
  std::vector<TimingRecord> timings;
};

void emit_selection_timings(RepContext& ctx, const MethodSpec& method,
                            const ValidationReport& report) {
  for (std::size_t k = 0; k < report.path_diagnostics.size(); ++k) {
    for (const SolverDiagnostics& d : report.path_diagnostics[k]) {
      TimingRecord t;
      t.replication = ctx.replication;
      t.method = method_spec_name(method);
      t.loss = method.family == MethodFamily::rdmc ? loss_name(method.loss) : "";
      t.stopping = stopping_name(method.stopping);
      t.phase = "selection";
      t.holdout = static_cast<int>(k);
      t.lambda = d.lambda;
      t.iterations = d.iterations;
      t.converged = d.converged;
      t.final_loss = d.final_loss;
      t.wall_time_ms = d.wall_time_ms;
      ctx.timings.push_back(std::move(t));
    }
  }
}

void emit_refit_timing(RepContext& ctx, const MethodSpec& method,
                       const SolverDiagnostics& d) {
  TimingRecord t;
  t.replication = ctx.replication;
  t.method = method_spec_name(method);
  t.loss = method.family == MethodFamily::rdmc ? loss_name(method.loss) : "";
  t.stopping = stopping_name(method.stopping);
  t.phase = "refit";
  t.holdout = -1;
  t.lambda = d.lambda;
  t.iterations = d.iterations;
  t.converged = d.converged;
  t.final_loss = d.final_loss;
  t.wall_time_ms = d.wall_time_ms;
  ctx.timings.push_back(std::move(t));
}

// Fits every configured method on one matrix. SI and SI-discretized share a
// single Soft-Impute fit per stopping mode (the discretized variant is a
// post-hoc mapping, not a separately tuned method), so its diagnostics and
// selected lambda appear under both names. Timing rows are emitted once per
// actual fit. With `fixed_lambdas` set (post-attack reuse), selection is
// skipped and each method refits at its recorded lambda.
std::map<std::string, MethodOutput> fit_all_methods(
    RepContext& ctx, const SparseRatingMatrix& train, const RatingScale& scale,
    const SelectionConfig& selection, std::uint64_t sampling_seed,
    const std::map<std::string, double>* fixed_lambdas,
    const std::vector<MethodSpec>& methods, bool emit_timings) {
  std::map<std::string, MethodOutput> outputs;
  std::map<std::string, SiMethodFit> si_cache;  // key: stopping name

  auto fixed_lambda_for = [&](const std::string& name) -> std::optional<double> {
    if (!fixed_lambdas) return std::nullopt;
    auto it = fixed_lambdas->find(name);
    if (it == fixed_lambdas->end())
      throw std::runtime_error("no pre-attack lambda recorded for " + name);
    return it->second;
  };

  for (const MethodSpec& method : methods) {
    const std::string name = method_spec_name(method);
    if (outputs.count(name)) continue;
    MethodOutput out;
    switch (method.family) {
      case MethodFamily::rdmc: {
        RdmcFit fit;
        if (auto fixed = fixed_lambda_for(name)) {
          fit = fit_rdmc_at(train, scale, method.loss, method.stopping, *fixed);
        } else {
          fit = fit_rdmc(train, scale, method.loss, method.stopping, selection);
          if (emit_timings) emit_selection_timings(ctx, method, fit.report);
        }
        if (emit_timings) emit_refit_timing(ctx, method, fit.diagnostics);
        out.predictions = std::move(fit.completion);
        out.lambda = fit.lambda;
        out.iterations = fit.diagnostics.iterations;
        out.wall_time_ms = fit.diagnostics.wall_time_ms;
        break;
      }
      case MethodFamily::si:
      case MethodFamily::si_discretized: {
        const std::string key = stopping_name(method.stopping);
        auto it = si_cache.find(key);
        if (it == si_cache.end()) {
          SiMethodFit fit;
          MethodSpec si_method = method;
          si_method.family = MethodFamily::si;
          const std::string si_name = method_spec_name(si_method);
          if (auto fixed = fixed_lambda_for(si_name)) {
            fit = fit_si_at(train, method.stopping, *fixed);
          } else {
            fit = fit_si(train, method.stopping, selection);
            if (emit_timings) emit_selection_timings(ctx, si_method, fit.report);
          }
          if (emit_timings) emit_refit_timing(ctx, si_method, fit.diagnostics);
          it = si_cache.emplace(key, std::move(fit)).first;
        }
        const SiMethodFit& fit = it->second;
        out.predictions = method.family == MethodFamily::si
                              ? fit.predictions
                              : discretize_predictions(fit.predictions, scale);
        out.lambda = fit.lambda;
        out.iterations = fit.diagnostics.iterations;
        out.wall_time_ms = fit.diagnostics.wall_time_ms;
        break;
      }
      case MethodFamily::median: {
        const auto start = std::chrono::steady_clock::now();
        out.predictions = median_impute(train);
        out.wall_time_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
        break;
      }
      case MethodFamily::median_discretized: {
        const auto start = std::chrono::steady_clock::now();
        out.predictions = median_impute_discretized(
            train, scale, mix_seed(sampling_seed, 1));
        out.wall_time_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
        break;
      }
      case MethodFamily::mode: {
        const auto start = std::chrono::steady_clock::now();
        out.predictions = mode_impute(train, scale, mix_seed(sampling_seed, 2));
        out.wall_time_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
        break;
      }
    }
    outputs.emplace(name, std::move(out));
  }
  return outputs;
}

ResultRecord base_record(const RepContext& ctx, const MethodSpec& method,
                         const std::string& missingness, int categories) {
  ResultRecord r;
  r.replication = ctx.replication;
  r.method = method_spec_name(method);
  if (method.family == MethodFamily::rdmc) r.loss = loss_name(method.loss);
  if (method.family == MethodFamily::rdmc || method.family == MethodFamily::si ||
      method.family == MethodFamily::si_discretized)
    r.stopping = stopping_name(method.stopping);
  r.categories = categories;
  r.missingness = missingness;
  return r;
}

// Shared MAE + attack-MPS phase once the training matrix, evaluation cells,
// and (for attacks) the target column and its missing rows are known.
void run_phase(RepContext& ctx, const SparseRatingMatrix& train,
               const RatingScale& scale, const std::string& missingness,
               const std::vector<Entry>& mae_cells,
               std::optional<int> attack_target,
               const std::vector<int>& target_rows) {
  const ExperimentConfig& config = ctx.config;
  const std::uint64_t rep_seed =
      config.seed + static_cast<std::uint64_t>(ctx.replication);
  const SelectionConfig selection{config.holdout_replications,
                                  config.holdout_fraction,
                                  mix_seed(rep_seed, kTagSelection)};

  std::map<std::string, MethodOutput> before = fit_all_methods(
      ctx, train, scale, selection, mix_seed(rep_seed, kTagBaseline), nullptr,
      config.methods, true);

  if (config.compute_mae) {
    for (const MethodSpec& method : config.methods) {
      const MethodOutput& out = before.at(method_spec_name(method));
      ResultRecord r = base_record(ctx, method, missingness, scale.categories);
      r.metric = "mae";
      r.value = mae(out.predictions, mae_cells);
      r.lambda = out.lambda;
      r.iterations = out.iterations;
      r.wall_time_ms = out.wall_time_ms;
      ctx.records.push_back(std::move(r));
    }
  }

  if (config.attacks.empty()) return;
  if (!attack_target)
    throw std::runtime_error("attack phase requested without a target");
  if (target_rows.empty())
    throw std::runtime_error(
        "attack target column has no missing cells to score");

  std::map<std::string, double> pre_lambdas;
  for (const auto& [name, out] : before)
    if (!std::isnan(out.lambda)) pre_lambdas[name] = out.lambda;

  std::vector<MethodSpec> attack_methods;
  for (const MethodSpec& method : config.methods)
    if (method.family != MethodFamily::mode || config.include_mode_under_attack)
      attack_methods.push_back(method);

  for (std::size_t s = 0; s < config.attacks.size(); ++s) {
    for (std::size_t e = 0; e < config.attack_epsilons.size(); ++e) {
      AttackSpec spec;
      spec.scheme = config.attacks[s];
      spec.epsilon = config.attack_epsilons[e];
      spec.seed = mix_seed(rep_seed, kTagAttackBase + 8 * s + e);
      AttackResult attack =
          forge_profiles(train, scale, *attack_target, spec);

      std::map<std::string, MethodOutput> after = fit_all_methods(
          ctx, attack.augmented, scale, selection,
          mix_seed(spec.seed, kTagBaseline),
          config.attack_reuse_lambda ? &pre_lambdas : nullptr, attack_methods,
          false);

      for (const MethodSpec& method : attack_methods) {
        const std::string name = method_spec_name(method);
        const MethodOutput& out = after.at(name);
        ResultRecord r = base_record(ctx, method, missingness, scale.categories);
        r.attack = attack_name(spec.scheme);
        r.epsilon = spec.epsilon;
        r.metric = "mps";
        r.value = mean_prediction_shift(before.at(name).predictions,
                                        out.predictions, target_rows,
                                        *attack_target);
        r.lambda = out.lambda;
        r.iterations = out.iterations;
        r.wall_time_ms = out.wall_time_ms;
        ctx.records.push_back(std::move(r));
      }
    }
  }
}

void run_recommender_rep(RepContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  const std::uint64_t rep_seed =
      config.seed + static_cast<std::uint64_t>(ctx.replication);
  RecommenderSimConfig gen;
  gen.n = config.n;
  gen.p = config.p;
  gen.rank = config.rank;
  gen.categories = config.categories;
  gen.seed = mix_seed(rep_seed, kTagGenerate);
  SimTruth truth = gen_recommender(gen);
  if (config.missingness == Missingness::mnar)
    inject_mnar(truth, mix_seed(rep_seed, kTagMissingness));
  else
    inject_mcar(truth, config.mcar_fraction, mix_seed(rep_seed, kTagMissingness));

  const SparseRatingMatrix observed = truth.make_observed();
  const int n = static_cast<int>(truth.r_full.n_rows);
  const int p = static_cast<int>(truth.r_full.n_cols);
  std::vector<Entry> mae_cells;
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i)
      if (!truth.observed(i, j))
        mae_cells.push_back({i, j, static_cast<double>(truth.r_full(i, j))});

  std::optional<int> target;
  std::vector<int> target_rows;
  if (!config.attacks.empty()) {
    target = select_target_simulated(truth);
    for (int i = 0; i < n; ++i)
      if (!truth.observed(i, *target)) target_rows.push_back(i);
  }
  run_phase(ctx, observed, truth.scale, missingness_name(config.missingness),
            mae_cells, target, target_rows);
}

void run_survey_rep(RepContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  const std::uint64_t rep_seed =
      config.seed + static_cast<std::uint64_t>(ctx.replication);
  SurveySimConfig gen;
  gen.n = config.n;
  gen.constructs = config.constructs;
  gen.items_per_construct = config.items_per_construct;
  gen.categories = config.categories;
  gen.seed = mix_seed(rep_seed, kTagGenerate);
  SimTruth truth = gen_survey(gen);
  inject_abandonment(truth, config.abandonment, mix_seed(rep_seed, kTagMissingness));
  inject_careless(truth, config.careless, mix_seed(rep_seed, kTagCareless));

  const SparseRatingMatrix observed = truth.make_observed();
  const int n = static_cast<int>(truth.r_full.n_rows);
  const int p = static_cast<int>(truth.r_full.n_cols);
  std::vector<unsigned char> is_careless(truth.r_full.n_rows, 0);
  for (int i : truth.careless_rows) is_careless[i] = 1;
  std::vector<Entry> mae_cells;
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i)
      if (!truth.observed(i, j) && !is_careless[i])
        mae_cells.push_back({i, j, static_cast<double>(truth.r_full(i, j))});

  run_phase(ctx, observed, truth.scale, "survey", mae_cells, std::nullopt, {});
}

void run_dataset_rep(RepContext& ctx, const LoadedMatrix& data) {
  const ExperimentConfig& config = ctx.config;
  const std::uint64_t rep_seed =
      config.seed + static_cast<std::uint64_t>(ctx.replication);
  const MaskSplit split = split_train_test(data.matrix, config.test_fraction,
                                           mix_seed(rep_seed, kTagSplit));
  const SparseRatingMatrix train = split.train_matrix(data.matrix);
  const std::vector<Entry> test_cells = split.test_entries(data.matrix);

  std::optional<int> target;
  std::vector<int> target_rows;
  if (!config.attacks.empty()) {
    target = select_target_empirical(train);
    // Score the shift on cells with no rating in the original matrix: held-out
    // test cells have known ratings and belong to MAE, not MPS.
    for (int i = 0; i < data.matrix.n_rows(); ++i)
      if (!data.matrix.has(i, *target)) target_rows.push_back(i);
  }
  run_phase(ctx, train, data.scale, "holdout", test_cells, target, target_rows);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();

  std::optional<LoadedMatrix> data;
  if (config.kind == ExperimentKind::dataset) {
    LoadedMatrix loaded = config.data_format == "movielens-udata"
                              ? read_movielens(config.data_path)
                              : read_long_csv(config.data_path, config.categories);
    if (config.min_ratings > 0) {
      FilterResult filtered =
          filter_min_ratings(loaded.matrix, config.min_ratings);
      loaded.matrix = std::move(filtered.matrix);
    }
    data = std::move(loaded);
  }

  std::vector<RepContext> contexts;
  contexts.reserve(config.replications);
  for (int rep = 0; rep < config.replications; ++rep)
    contexts.push_back(RepContext{config, rep, {}, {}});
  std::vector<std::string> failures(config.replications);

  auto run_one = [&](int rep) {
    try {
      switch (config.kind) {
        case ExperimentKind::recommender:
          run_recommender_rep(contexts[rep]);
          break;
        case ExperimentKind::survey:
          run_survey_rep(contexts[rep]);
          break;
        case ExperimentKind::dataset:
          run_dataset_rep(contexts[rep], *data);
          break;
      }
    } catch (const std::exception& ex) {
      failures[rep] = ex.what();
      contexts[rep].records.clear();
      contexts[rep].timings.clear();
    }
  };

  const int workers = std::min(config.threads, config.replications);
  if (workers <= 1) {
    for (int rep = 0; rep < config.replications; ++rep) run_one(rep);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int rep = next.fetch_add(1); rep < config.replications;
             rep = next.fetch_add(1))
          run_one(rep);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  ExperimentResult result;
  for (int rep = 0; rep < config.replications; ++rep) {
    if (!failures[rep].empty()) {
      result.failures.push_back("replication " + std::to_string(rep) + ": " +
                                failures[rep]);
      continue;
    }
    result.records.insert(result.records.end(), contexts[rep].records.begin(),
                          contexts[rep].records.end());
    result.timings.insert(result.timings.end(), contexts[rep].timings.begin(),
                          contexts[rep].timings.end());
  }

  if (10 * static_cast<int>(result.failures.size()) > config.replications) {
    std::string message = "experiment aborted: more than 10% of replications failed";
    for (const std::string& f : result.failures) message += "\n  " + f;
    throw std::runtime_error(message);
  }
  return result;
}

void write_experiment_outputs(const std::string& out_dir,
                              const ExperimentResult& result) {
  std::filesystem::create_directories(out_dir);
  write_records_csv(out_dir + "/records.csv", result.records);
  write_timings_csv(out_dir + "/timings.csv", result.timings);
}

}  // namespace rdmc
