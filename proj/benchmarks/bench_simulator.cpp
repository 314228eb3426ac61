// Copyright 2026 The noisefp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <random>

#include <benchmark/benchmark.h>

#include "noisefp/acquisition.hpp"
#include "noisefp/random.hpp"
#include "noisefp/simulator.hpp"

namespace {

using namespace noisefp;

void BM_NoisyDistributions(benchmark::State& state) {
  const auto profile = acquisition::builtin_profile("alder");
  for (auto _ : state) benchmark::DoNotOptimize(acquisition::noisy_distributions(profile));
}
BENCHMARK(BM_NoisyDistributions)->Unit(benchmark::kMillisecond);

void BM_SampleCounts(benchmark::State& state) {
  const auto dists = acquisition::noisy_distributions(acquisition::builtin_profile("cedar"));
  Rng rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(sim::sample_counts(dists[8], 1000, rng));
}
BENCHMARK(BM_SampleCounts);

}  // namespace
