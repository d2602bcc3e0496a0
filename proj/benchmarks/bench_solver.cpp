// Microbenchmarks for the solver inner loops and small end-to-end fits.

#include <benchmark/benchmark.h>

#include <random>

#include "rdmc/rating_matrix.hpp"
#include "rdmc/rng.hpp"
#include "rdmc/soft_impute.hpp"
#include "rdmc/solver.hpp"

namespace {

rdmc::SparseRatingMatrix random_instance(int n, int p, int categories,
                                         double density, std::uint64_t seed) {
  rdmc::Rng rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> category(1, categories);
  std::vector<rdmc::Entry> entries;
  for (int j = 0; j < p; ++j) {
    bool any = false;
    for (int i = 0; i < n; ++i) {
      if (coin(rng) < density) {
        entries.push_back({i, j, static_cast<double>(category(rng))});
        any = true;
      }
    }
    if (!any) entries.push_back({0, j, static_cast<double>(category(rng))});
  }
  return rdmc::SparseRatingMatrix(n, p, std::move(entries));
}

void BM_ZUpdate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = n * 2 / 3;
  rdmc::RatingScale scale{10};
  auto x = random_instance(n, p, 10, 0.3, 7);
  rdmc::CenteredMatrix cm = rdmc::center(x, scale);
  rdmc::SolverState s = rdmc::init_state(cm);
  s.theta.zeros(n, p);
  for (auto _ : state) {
    rdmc::SolverState work = s;
    benchmark::DoNotOptimize(rdmc::update_z(work, 0.5));
  }
}
BENCHMARK(BM_ZUpdate)->Arg(150)->Arg(300);

void BM_LUpdate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = n * 2 / 3;
  rdmc::RatingScale scale{10};
  auto x = random_instance(n, p, 10, 0.3, 7);
  rdmc::CenteredMatrix cm = rdmc::center(x, scale);
  rdmc::LossSpec loss = rdmc::LossSpec::make(rdmc::LossKind::pseudo_huber, scale);
  rdmc::SolverState s = rdmc::init_state(cm);
  s.theta.zeros(n, p);
  rdmc::update_z(s, 0.5);
  for (auto _ : state) {
    rdmc::SolverState work = s;
    benchmark::DoNotOptimize(rdmc::update_l(work, cm, loss));
  }
}
BENCHMARK(BM_LUpdate)->Arg(150)->Arg(300);

void BM_SolveLiberal(benchmark::State& state) {
  rdmc::RatingScale scale{5};
  auto x = random_instance(60, 40, 5, 0.4, 11);
  rdmc::CenteredMatrix cm = rdmc::center(x, scale);
  rdmc::SolverConfig config = rdmc::SolverConfig::defaults(
      rdmc::LossSpec::make(rdmc::LossKind::pseudo_huber, scale),
      rdmc::Stopping::liberal);
  config.lambda = 0.5;
  for (auto _ : state)
    benchmark::DoNotOptimize(rdmc::solve(cm, config));
}
BENCHMARK(BM_SolveLiberal);

void BM_SoftImputeLiberal(benchmark::State& state) {
  auto x = random_instance(60, 40, 5, 0.4, 11);
  rdmc::SiConfig config = rdmc::SiConfig::defaults(rdmc::Stopping::liberal);
  config.lambda = 0.5;
  for (auto _ : state)
    benchmark::DoNotOptimize(rdmc::si_solve(x, config));
}
BENCHMARK(BM_SoftImputeLiberal);

}  // namespace

BENCHMARK_MAIN();
