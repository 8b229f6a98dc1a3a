// Hot-path microbenchmarks: per-dimension distance and embedding, combined
// kernel, Gram assembly, and the GP fit/predict cycle on a small mixed space.
#include <benchmark/benchmark.h>

#include <vector>

#include "archk/gp.hpp"
#include "archk/kernel.hpp"
#include "archk/rng.hpp"
#include "archk/space.hpp"

using namespace archk;

namespace {

SpacePtr bench_space() {
  SpaceDescription desc;
  Dimension g;
  g.id = "G";
  g.domain = Categorical{{"on", "off"}};
  Dimension r0;
  r0.id = "r0";
  r0.domain = RealBounded{-3.0, 7.0};
  Dimension r1;
  r1.id = "r1";
  r1.domain = RealBounded{0.0, 1.0};
  Dimension c0;
  c0.id = "c0";
  c0.domain = Categorical{{"a", "b", "c", "d", "e"}};
  Dimension r2;
  r2.id = "r2";
  r2.domain = RealBounded{0.0, 10.0};
  desc.dimensions = {g, r0, r1, c0, r2};
  desc.conditions.push_back({"r1", "G", {"on"}});
  desc.conditions.push_back({"c0", "G", {"on"}});
  desc.conditions.push_back({"r2", "c0", {"a", "b"}});
  return ParamSpace::validate(desc);
}

KernelSpec bench_spec() {
  DimKernel dk;
  dk.gamma = 0.8;
  dk.rho = 0.6;
  dk.base = ExponentiatedQuadratic{1.0, 0.7};
  return KernelSpec::shared(bench_space(), dk, Combination::Product);
}

std::vector<Config> bench_configs(std::size_t n, std::uint64_t seed) {
  const SpacePtr space = bench_space();
  Rng rng(seed);
  std::vector<Config> configs;
  configs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) configs.push_back(space->sample_config(rng));
  return configs;
}

void bm_sample_config(benchmark::State& state) {
  const SpacePtr space = bench_space();
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(space->sample_config(rng));
  }
}
BENCHMARK(bm_sample_config);

void bm_bind(benchmark::State& state) {
  const SpacePtr space = bench_space();
  const Config config = space->sample_config(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(space->bind(config));
  }
}
BENCHMARK(bm_bind);

void bm_dist_dim(benchmark::State& state) {
  const KernelSpec spec = bench_spec();
  const auto x = spec.space().bind(spec.space().sample_config(3));
  const auto y = spec.space().bind(spec.space().sample_config(4));
  const std::size_t dims = spec.space().size();
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t i = 0; i < dims; ++i) acc += dist_dim(spec, i, x, y);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(bm_dist_dim);

void bm_embed_dim(benchmark::State& state) {
  const KernelSpec spec = bench_spec();
  const auto x = spec.space().bind(spec.space().sample_config(5));
  const std::size_t dims = spec.space().size();
  for (auto _ : state) {
    for (std::size_t i = 0; i < dims; ++i) {
      benchmark::DoNotOptimize(embed_dim(spec, i, x));
    }
  }
}
BENCHMARK(bm_embed_dim);

void bm_k_combined(benchmark::State& state) {
  const KernelSpec spec = bench_spec();
  const auto x = spec.space().bind(spec.space().sample_config(6));
  const auto y = spec.space().bind(spec.space().sample_config(7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(k_combined(spec, x, y));
  }
}
BENCHMARK(bm_k_combined);

void bm_gram(benchmark::State& state) {
  const KernelSpec spec = bench_spec();
  const std::vector<Config> configs = bench_configs(state.range(0), 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram(spec, configs));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_gram)->Arg(10)->Arg(50)->Arg(100)->Complexity(benchmark::oNSquared);

void bm_fit(benchmark::State& state) {
  const KernelSpec spec = bench_spec();
  Dataset data;
  data.configs = bench_configs(state.range(0), 9);
  data.targets = Eigen::VectorXd::LinSpaced(state.range(0), -1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(GpModel::fit(spec, data, 1e-4));
  }
}
BENCHMARK(bm_fit)->Arg(25)->Arg(100);

void bm_predict(benchmark::State& state) {
  const KernelSpec spec = bench_spec();
  Dataset data;
  data.configs = bench_configs(50, 10);
  data.targets = Eigen::VectorXd::LinSpaced(50, -1.0, 1.0);
  const GpModel model = GpModel::fit(spec, data, 1e-4);
  const std::vector<Config> queries = bench_configs(state.range(0), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.predict(queries));
  }
}
BENCHMARK(bm_predict)->Arg(1)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
