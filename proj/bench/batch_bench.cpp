#include <benchmark/benchmark.h>

#include <omp.h>

#include <random>
#include <vector>

#include "tdtm/batch.hpp"

namespace {

using namespace tdtm;

struct Workload {
  TmModel model;
  std::vector<Sample> samples;
};

// Coalesced machine of roughly Iris scale with random masks and weights.
Workload make_workload(std::size_t n) {
  std::mt19937_64 rng(20261019);
  Workload w;
  TmModel& m = w.model;
  m.variant = Variant::Coalesced;
  m.num_features = 16;
  m.num_clauses = 24;
  m.num_classes = 4;
  for (std::size_t j = 0; j < m.num_clauses; ++j) {
    Bits mask(2 * m.num_features);
    for (auto& b : mask) b = rng() % 5 == 0 ? 0 : 1;
    m.exclude_masks.push_back(std::move(mask));
  }
  std::uniform_int_distribution<int> wd(-8, 8);
  m.weights.assign(m.num_classes, std::vector<std::int32_t>(m.num_clauses));
  for (auto& row : m.weights)
    for (auto& x : row) x = wd(rng);
  for (std::size_t i = 0; i < n; ++i) {
    Bits f(m.num_features);
    for (auto& b : f) b = rng() & 1;
    w.samples.push_back({std::move(f), {}});
  }
  return w;
}

SimConfig bench_config() {
  SimConfig cfg;
  cfg.mode = Mode::CotmArchitectural;
  cfg.arbiter = Topology::Mesh;
  cfg.wta.policy = MetaPolicy::SeededRandom;
  return cfg;
}

void BM_Serial(benchmark::State& state) {
  const auto w = make_workload(static_cast<std::size_t>(state.range(0)));
  const auto cfg = bench_config();
  for (auto _ : state) {
    auto r = run_batch_serial(w.model, w.samples, cfg);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Parallel(benchmark::State& state) {
  const auto w = make_workload(static_cast<std::size_t>(state.range(0)));
  const auto cfg = bench_config();
  const int threads = omp_get_max_threads();
  for (auto _ : state) {
    auto r = run_batch_parallel(w.model, w.samples, cfg, threads);
    benchmark::DoNotOptimize(r.data());
  }
  state.counters["threads"] = threads;
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_Serial)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
