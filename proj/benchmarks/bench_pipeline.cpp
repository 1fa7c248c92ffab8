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

#include "rtv/harness.hpp"
#include "rtv/scenario.hpp"

namespace {

void BM_GenerateScenario(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rtv::generate({}));
}
BENCHMARK(BM_GenerateScenario);

// One full default stream through the monitor, without posterior checkpoints.
void BM_MonitorStream(benchmark::State& state) {
  const rtv::LabeledStream stream = rtv::generate({});
  rtv::MonitorSpec spec;
  spec.sigma = rtv::FixedSigma{rtv::sigma_oracle(stream)};
  const rtv::RunOptions options{.checkpoints = {}};
  for (auto _ : state) benchmark::DoNotOptimize(rtv::run_monitor(stream, spec, options));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stream.size()));
}
BENCHMARK(BM_MonitorStream)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
