#include <benchmark/benchmark.h>

#include "aol/estimators.hpp"
#include "aol/worlds.hpp"

namespace {

using namespace aol;

std::vector<Predictor> random_members(std::size_t count, PointIndex support, Rng& rng) {
  std::vector<Predictor> members;
  members.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> vals(support);
    for (double& v : vals) v = rng.next_unit();
    members.push_back(Predictor::member(FlatFunction::from_dense(vals)));
  }
  return members;
}

void BM_greedy_cover(benchmark::State& state) {
  Rng rng(1);
  const PointIndex support = 32;
  const auto members = random_members(state.range(0), support, rng);
  Dataset s;
  for (int i = 0; i < 256; ++i) {
    s.pairs.push_back({static_cast<PointIndex>(rng.below(support) + 1), 0.0});
  }
  const auto ctx = EmpiricalMetricContext::from_sample(s, support);
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_cover(members, 0.25, ctx));
  }
}
BENCHMARK(BM_greedy_cover)->Arg(64)->Arg(256)->Arg(1024);

void BM_simplex_least_squares(benchmark::State& state) {
  Rng rng(2);
  const PointIndex support = 40;
  std::vector<FlatFunction> dict;
  for (int j = 0; j < state.range(0); ++j) {
    std::vector<double> vals(support);
    for (double& v : vals) v = rng.uniform(0.3, 0.7);
    dict.push_back(FlatFunction::from_dense(vals));
  }
  Dataset d;
  for (int i = 0; i < 4096; ++i) {
    d.pairs.push_back({static_cast<PointIndex>(rng.below(support) + 1),
                       rng.bernoulli(0.5) ? 1.0 : 0.0});
  }
  const auto moments = LabelMoments::from_sample(d, support);
  std::vector<std::uint32_t> all(dict.size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  for (auto _ : state) {
    benchmark::DoNotOptimize(erm_simplex(dict, all, moments, 1e-6, 2000));
  }
}
BENCHMARK(BM_simplex_least_squares)->Arg(5)->Arg(20);

void BM_aol_fit_finite(benchmark::State& state) {
  Rng rng(3);
  const World world = make_finite_constants_world(16, 8, 0.3, 0.7, true, rng);
  const Dataset d3n = sample_world(world, 3 * state.range(0), rng);
  const auto members = enumerate_members(world.ref_class, 1u << 16);
  AolConfig cfg;
  cfg.epsilon = {EpsilonRule::Kind::Vc, 2.0, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(aol_fit(members, d3n, cfg));
  }
}
BENCHMARK(BM_aol_fit_finite)->Arg(256)->Arg(2048);

void BM_exact_risk(benchmark::State& state) {
  Rng rng(4);
  const World world = make_hypercube_world(state.range(0), 2.0, HypercubeVariant::Risk, rng);
  std::vector<double> vals(world.support_size);
  for (double& v : vals) v = rng.next_unit();
  const Predictor pred = Predictor::member(FlatFunction::from_dense(vals));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_risk(world, pred));
  }
}
BENCHMARK(BM_exact_risk)->Arg(1024)->Arg(8192);

void BM_sample_world(benchmark::State& state) {
  Rng rng(5);
  const World world = make_hypercube_world(2048, 2.0, HypercubeVariant::Risk, rng);
  for (auto _ : state) {
    Rng draw(42);
    benchmark::DoNotOptimize(sample_world(world, state.range(0), draw));
  }
}
BENCHMARK(BM_sample_world)->Arg(1024)->Arg(16384);

}  // namespace

BENCHMARK_MAIN();
