#include <benchmark/benchmark.h>

#include "rllq/actor_critic.hpp"
#include "rllq/baseline.hpp"
#include "rllq/random_stream.hpp"
#include "rllq/sde_sim.hpp"

using namespace rllq;

static void BM_EulerEpisode(benchmark::State& state) {
  const double dt = 1.0 / static_cast<double>(state.range(0));
  RandomStream rng(1);
  Trajectory tr;
  for (auto _ : state) {
    simulate_episode_rllq(ModelParams{}, {-2.0, 0.2}, dt, rng, tr);
    benchmark::DoNotOptimize(tr.states.back());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EulerEpisode)->Arg(100)->Arg(1000);

static void BM_GeometricEpisode(benchmark::State& state) {
  RandomStream rng(2);
  Trajectory tr;
  for (auto _ : state) {
    simulate_episode_geometric(ModelParams{}, -1.5, 0.01, rng, tr);
    benchmark::DoNotOptimize(tr.states.back());
  }
}
BENCHMARK(BM_GeometricEpisode);

static void BM_ActorGradient(benchmark::State& state) {
  RandomStream rng(3);
  const PolicyParams p{-1.0, 0.2};
  const Trajectory tr = simulate_episode_rllq(ModelParams{}, p, 0.01, rng);
  const ValueCritic critic;
  for (auto _ : state) benchmark::DoNotOptimize(actor_gradient(tr, critic, p, 2.0, 1.0));
}
BENCHMARK(BM_ActorGradient);

// Whole replications, so the per-episode cost includes bookkeeping and refits.
static void BM_RllqReplication(benchmark::State& state) {
  RllqConfig cfg;
  cfg.episodes = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(run_replication(cfg, {1, 0}).final_state.phi1);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RllqReplication)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_BaselineReplication(benchmark::State& state) {
  BaselineConfig cfg;
  cfg.episodes = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_replication_baseline(cfg, {1, 0}).final_estimate.A);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BaselineReplication)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
