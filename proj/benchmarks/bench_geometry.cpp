#include <benchmark/benchmark.h>

#include "ntnlab/geometry.hpp"
#include "ntnlab/link_metrics.hpp"

namespace {

void BM_Propagate(benchmark::State& state) {
  const ntn::EarthModel earth;
  const ntn::OrbitConfig orbit;
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ntn::propagate(earth, orbit, t));
    t += 0.1;
  }
}
BENCHMARK(BM_Propagate);

// One 600 km pass at the given sampling interval (ms).
void BM_SampleTrace(benchmark::State& state) {
  const ntn::EarthModel earth;
  const ntn::OrbitConfig orbit;
  const double dt = static_cast<double>(state.range(0)) / 1000.0;
  std::size_t n = 0;
  for (auto _ : state) {
    const ntn::Trace tr =
        ntn::sample_trace(earth, orbit, ntn::GroundPoint{}, ntn::CarrierConfig{}, -255.0, 255.0, dt);
    n += tr.samples.size();
    benchmark::DoNotOptimize(tr.samples.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SampleTrace)->Arg(1000)->Arg(100)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_VisibilityPasses(benchmark::State& state) {
  const ntn::EarthModel earth;
  const ntn::OrbitConfig orbit;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ntn::visibility_passes(earth, orbit, ntn::GroundPoint{20.0, 10.0}, 10.0, 0.0, 86400.0));
  }
}
BENCHMARK(BM_VisibilityPasses)->Unit(benchmark::kMillisecond);

}  // namespace
