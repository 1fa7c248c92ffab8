// Copyright 2026 The rtv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#include <benchmark/benchmark.h>

#include <random>

#include "rtv/belief.hpp"
#include "rtv/special_functions.hpp"

namespace {

rtv::BeliefState belief_of_size(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.9, 1.0);
  rtv::BeliefState b;
  for (std::size_t i = 0; i < n; ++i) b = rtv::belief_update(b, u(rng));
  return b;
}

void BM_BeliefUpdate(benchmark::State& state) {
  const rtv::BeliefState b = belief_of_size(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rtv::belief_update(b, 0.97));
}
BENCHMARK(BM_BeliefUpdate)->Arg(100)->Arg(1000)->Arg(10000);

void BM_Confidence(benchmark::State& state) {
  const rtv::BeliefState b = belief_of_size(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rtv::confidence(b, 0.018));
}
BENCHMARK(BM_Confidence)->Arg(100)->Arg(1000);

void BM_PosteriorPdf(benchmark::State& state) {
  const rtv::BeliefState b = belief_of_size(1000);
  for (auto _ : state) benchmark::DoNotOptimize(rtv::posterior_pdf(b, 0.01));
}
BENCHMARK(BM_PosteriorPdf);

void BM_IncompleteBeta(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rtv::math::regularized_incomplete_beta(a, 1000 - a, 0.018));
  }
}
BENCHMARK(BM_IncompleteBeta)->Arg(1)->Arg(10)->Arg(100);

}  // namespace
