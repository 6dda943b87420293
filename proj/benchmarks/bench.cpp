#include <benchmark/benchmark.h>

#include <numbers>

#include "mhdflow/families.hpp"
#include "mhdflow/function.hpp"
#include "mhdflow/geometry.hpp"
#include "mhdflow/verify.hpp"

using namespace mhdflow;

namespace {

constexpr double pi = std::numbers::pi;
const KBox kFig1Box{Interval{0, 2 * pi}, Interval{0, 2 * pi}, Interval{0.2, 1.5}};

FlowMap fig1() {
  return build_s2(parse("sin(k1)"), parse("cos(2*t3)"), circular(PlaneBox{kFig1Box[1], kFig1Box[2]}), 0.0, kFig1Box);
}

void expression_eval(benchmark::State& state) {
  const SmoothFunction<3> f(parse("sqrt(2*k3)*sin(k2) + cos(2*sqrt(2*k3)*cos(k2))*k1^2"), {"k1", "k2", "k3"});
  std::array<double, 3> k{0.3, 1.1, 0.7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.jet(k));
    k[0] += 1e-9;
  }
}
BENCHMARK(expression_eval);

void verify_fig1(benchmark::State& state) {
  const FlowMap m = fig1();
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_reduced(m));
    benchmark::DoNotOptimize(verify_physical(m));
  }
}
BENCHMARK(verify_fig1)->Unit(benchmark::kMillisecond);

void potential_construction(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(from_potential(circular_potential(), PlaneBox{{-1.5, 1.5}, {0.1, 2}}));
}
BENCHMARK(potential_construction)->Unit(benchmark::kMillisecond);

void potential_jet(benchmark::State& state) {
  const AreaMap m = from_potential(circular_potential(), PlaneBox{{-1.5, 1.5}, {0.1, 2}});
  double k2 = -1.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.jet(k2, 0.9));
    k2 = k2 > 1.4 ? -1.4 : k2 + 1e-3;
  }
}
BENCHMARK(potential_jet);

void surface_tessellation(benchmark::State& state) {
  const FlowMap m = fig1();
  TessellationOptions o;
  o.n1 = o.n2 = 128;
  for (auto _ : state) benchmark::DoNotOptimize(tessellate_surface(m, 1.0, kFig1Box[0], kFig1Box[1], o));
}
BENCHMARK(surface_tessellation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
