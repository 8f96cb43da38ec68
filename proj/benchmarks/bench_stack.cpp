#include <benchmark/benchmark.h>

#include "ntnlab/stack_sim.hpp"

namespace {

void BM_RunScenario(benchmark::State& state) {
  ntn::StackScenario s;
  s.harq.enabled = state.range(0) != 0;
  s.traffic.num_packets = state.range(1);
  for (auto _ : state) {
    const ntn::SimReport r = ntn::run_scenario(s);
    benchmark::DoNotOptimize(r.rlc_pdu_delays_us.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_RunScenario)
    ->Args({1, 1000})
    ->Args({1, 10000})
    ->Args({0, 10000})
    ->Unit(benchmark::kMillisecond);

void BM_Saturation(benchmark::State& state) {
  ntn::LinkModel link;
  link.bler = 0.0;
  ntn::HarqConfig harq;
  harq.num_processes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ntn::saturation_throughput(link, harq, ntn::RlcAmConfig{}));
  }
}
BENCHMARK(BM_Saturation)->Arg(16)->Arg(513)->Unit(benchmark::kMillisecond);

}  // namespace
