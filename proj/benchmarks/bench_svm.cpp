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


#include <cstdint>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "noisefp/svm.hpp"

namespace {

using namespace noisefp;

// Two overlapping Gaussian blobs in 16 dimensions, the size of one step's histogram.
svm::LabeledSet blobs(int n) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 1.0);
  svm::LabeledSet set;
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    svm::FeatureVector x(16);
    for (auto& v : x) v = noise(rng) + 0.8 * label;
    set.x.push_back(std::move(x));
    set.y.push_back(label);
  }
  return set;
}

void BM_GramMatrix(benchmark::State& state) {
  const auto set = blobs(static_cast<int>(state.range(0)));
  const svm::KernelSpec rbf{svm::KernelKind::Rbf, svm::default_gamma(set), 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(svm::gram_matrix(rbf, set.x));
}
BENCHMARK(BM_GramMatrix)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_TrainBinary(benchmark::State& state) {
  const auto set = blobs(static_cast<int>(state.range(0)));
  const svm::KernelSpec rbf{svm::KernelKind::Rbf, svm::default_gamma(set), 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(svm::train_binary(set, 1.0, rbf));
}
BENCHMARK(BM_TrainBinary)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace
