// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "morphguard/embedding.hpp"
#include "morphguard/metrics.hpp"
#include "morphguard/morphing.hpp"
#include "morphguard/rng.hpp"
#include "morphguard/scores.hpp"
#include "morphguard/simulator.hpp"

namespace {

using namespace morphguard;

void BM_SampleVmf(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(1);
  const Embedding mu = sample_uniform_direction(d, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_vmf(mu, 250.0, rng));
  }
}
BENCHMARK(BM_SampleVmf)->Arg(64)->Arg(128)->Arg(512);

void BM_Angle(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(2);
  const Embedding u = sample_uniform_direction(d, rng);
  const Embedding v = sample_uniform_direction(d, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(angle_unit(u, v));
  }
}
BENCHMARK(BM_Angle)->Arg(128)->Arg(512);

void BM_WorstCaseEmbedding(benchmark::State& state) {
  Rng rng(3);
  const Embedding u = sample_uniform_direction(128, rng);
  const Embedding v = sample_uniform_direction(128, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(worst_case_embedding(u, v));
  }
}
BENCHMARK(BM_WorstCaseEmbedding);

void BM_SimulatePopulation(benchmark::State& state) {
  SimulationParams p;
  p.dimension = 128;
  p.n_identities = static_cast<int>(state.range(0));
  p.samples_per_identity = 10;
  p.seed = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_population(p));
  }
}
BENCHMARK(BM_SimulatePopulation)->Arg(10)->Arg(50);

void BM_ComputeScores(benchmark::State& state) {
  SimulationParams p;
  p.dimension = 128;
  p.n_identities = static_cast<int>(state.range(0));
  p.samples_per_identity = 10;
  p.seed = 5;
  const Dataset ds = simulate_population(p);
  Rng rng(6);
  const auto pairs = select_pairs(ds, PairStrategy::random_disjoint, rng);
  const auto attacks = generate_wc_attacks(ds, pairs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_scores(ds, attacks));
  }
}
BENCHMARK(BM_ComputeScores)->Arg(20)->Arg(60);

ScoreSet synthetic_scores(int n) {
  Rng rng(7);
  ScoreSet s;
  for (int i = 0; i < n; ++i) {
    ScoreRecord r;
    r.comparison_type = i % 2 == 0 ? ComparisonType::mated
                                   : ComparisonType::nonmated;
    r.score = rng.uniform() * 3.14159;
    s.records.push_back(r);
  }
  return s;
}

void BM_ScoreAnalysis(benchmark::State& state) {
  const ScoreSet s = synthetic_scores(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const ScoreAnalysis a(s);
    benchmark::DoNotOptimize(a.threshold_at_fmr(0.01));
  }
}
BENCHMARK(BM_ScoreAnalysis)->Arg(10000)->Arg(100000);

void BM_DetSweep(benchmark::State& state) {
  const ScoreSet s = synthetic_scores(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(det_sweep(s));
  }
}
BENCHMARK(BM_DetSweep)->Arg(2000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
