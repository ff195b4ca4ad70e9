#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "diffuse/discrete_agents.hpp"
#include "diffuse/geometry.hpp"
#include "diffuse/simulator.hpp"
#include "diffuse/uncertain_agents.hpp"

using namespace diffuse;

namespace {

FiniteSet1D random_codebook(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1e5, 1e5);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return FiniteSet1D::from_unsorted(v);
}

ConvexPolygon random_polygon(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Setpoint> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return convex_hull(pts);
}

}  // namespace

static void BM_ProjectFinite(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto s = random_codebook(rng, static_cast<std::size_t>(state.range(0)));
  std::uniform_real_distribution<double> u(s.min(), s.max());
  for (auto _ : state) benchmark::DoNotOptimize(project_finite(s, u(rng)));
}
BENCHMARK(BM_ProjectFinite)->Arg(2)->Arg(8)->Arg(256);

static void BM_DiscreteAgentStep(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto s = random_codebook(rng, 8);
  std::uniform_real_distribution<double> u(s.min(), s.max());
  for (auto _ : state) {
    state.PauseTiming();
    DiscreteAgent a;
    state.ResumeTiming();
    for (int k = 0; k < 1000; ++k) benchmark::DoNotOptimize(a.step(s, u(rng)));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_DiscreteAgentStep);

static void BM_MinkowskiSum(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto a = random_polygon(rng, static_cast<std::size_t>(state.range(0)));
  const auto b = random_polygon(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(minkowski_sum(a, b));
}
BENCHMARK(BM_MinkowskiSum)->Arg(8)->Arg(64)->Arg(512);

static void BM_IsPtiSubset(benchmark::State& state) {
  const auto d = TriangleSet{1e4, std::numbers::pi / 4}.polygon();
  const TriangleSet i{5e3, std::numbers::pi / 4};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(is_pti_subset(i, d, static_cast<std::size_t>(state.range(0)), seed++));
}
BENCHMARK(BM_IsPtiSubset)->Arg(1000)->Arg(10000);

static void BM_HeaterScenario(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.steps = 10000;
  cfg.alpha = 1.0;
  cfg.objective = QuadraticObjective(Eigen::Matrix2d::Identity(), Eigen::Vector2d(7500, 0));
  HeaterResource h;
  h.p_heat = {15000};
  cfg.resources.push_back({"heater", h});
  cfg.thermal.push_back({});
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(cfg));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_HeaterScenario)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
