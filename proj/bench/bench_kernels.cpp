#include "wavemorph/filters.hpp"
#include "wavemorph/kernels.hpp"
#include "wavemorph/pipeline.hpp"
#include "wavemorph/synthetic.hpp"
#include "wavemorph/wavelet.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace wavemorph;

namespace {

Plane noise(std::size_t side) {
  std::mt19937_64 rng(side);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Plane p(side, side);
  for (double& v : p.values()) v = u(rng);
  return p;
}

template <Backend B>
void filter_columns(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const Plane in = noise(side);
  Plane out(side, side);
  const FilterPair f = daubechies4();
  for (auto _ : state) {
    filter_axis(B, in, f.low, 4, Axis::columns, out);
    benchmark::DoNotOptimize(out.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(side * side));
}

template <Backend B>
void decompose(benchmark::State& state) {
  const Plane img = noise(static_cast<std::size_t>(state.range(0)));
  const FilterPair f = haar();
  for (auto _ : state) benchmark::DoNotOptimize(decompose_48(img, f, B));
}

void entropy_batch(benchmark::State& state) {
  SyntheticOptions o;
  o.n_bonafide = 16;
  o.n_morphed = 16;
  o.size = 64;
  const auto ds = synthetic_dataset(generate_synthetic(o), "bench", 0);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_entropies(ds, haar(), 256, workers));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(ds.images.size()));
}

} // namespace

BENCHMARK(filter_columns<Backend::serial>)->Arg(256)->Arg(512);
BENCHMARK(filter_columns<Backend::parallel>)->Arg(256)->Arg(512);
BENCHMARK(decompose<Backend::serial>)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(decompose<Backend::parallel>)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(entropy_batch)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
