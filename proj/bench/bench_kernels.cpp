// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <cmath>

#include "fracbranch/csbp.hpp"
#include "fracbranch/gw.hpp"
#include "fracbranch/special_fn.hpp"

using namespace fracbranch;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_CaputoL1(benchmark::State& state) {
  special_fn::GridFunction f;
  for (int i = 0; i <= 4000; ++i) {
    const double t = i * 2.5e-4;
    f.t_grid.push_back(t);
    f.values.push_back(std::exp(-t) * std::sin(3.0 * t));
  }
  for (auto _ : state) benchmark::DoNotOptimize(special_fn::caputo_l1(f, 0.6, mode(state)));
}
BENCHMARK(BM_CaputoL1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FellerMarginals(benchmark::State& state) {
  const csbp::TcProcessSpec spec{csbp::FellerSpec{1.0, 1.0, 1.0}, 0.5};
  for (auto _ : state)
    benchmark::DoNotOptimize(csbp::sample_time_changed_marginals(spec, 1.0, 2000, RngStream(1), {}, mode(state)));
}
BENCHMARK(BM_FellerMarginals)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BranchingInequality(benchmark::State& state) {
  const gw::OffspringLaw law(std::vector<double>{0.74, 0, 0, 0, 0, 0.26});
  const auto wait = random::WaitingTimeLaw::pareto(0.6);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        gw::branching_inequality_experiment(1, 1, 1.0, 2.0, law, wait, 20000, RngStream(2), mode(state)));
}
BENCHMARK(BM_BranchingInequality)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BranchingGap(benchmark::State& state) {
  const csbp::BranchingMechanism mech(0.5, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(csbp::tc_branching_gap(mech, 1.0, 2.0, 1.0, 1.0, 0.6, 20000, RngStream(3), mode(state)));
}
BENCHMARK(BM_BranchingGap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
