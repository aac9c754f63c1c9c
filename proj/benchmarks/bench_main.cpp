#include <benchmark/benchmark.h>

#include "ross/fem.hpp"
#include "ross/lemmas.hpp"
#include "ross/mesh.hpp"
#include "ross/radial_solver.hpp"
#include "ross/verifier.hpp"

namespace {

const ross::Space kH2 = ross::Space::make(1, 2, false);

void BM_SolveBall(benchmark::State& state) {
  const auto space = ross::Space::make(2, static_cast<int>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(ross::solve_ball(space, 0.6).mu1);
}
BENCHMARK(BM_SolveBall)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_RayleighBall(benchmark::State& state) {
  const auto space = ross::Space::make(1, 3, false);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ross::solve_ball_rayleigh(space, 1.0, n).mu1);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RayleighBall)->RangeMultiplier(2)->Range(500, 4000)->Complexity()->Unit(benchmark::kMicrosecond);

void BM_MeshEllipse(benchmark::State& state) {
  const auto model = ross::build_model(kH2);
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ross::mesh_domain(model, ross::Ellipse{0.6, 0.3, 0.0, {0.0, 0.0}, 0.0}, h));
  }
}
BENCHMARK(BM_MeshEllipse)->Arg(12)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const auto model = ross::build_model(kH2);
  const auto mesh = ross::mesh_domain(model, ross::Ellipse{0.6, 0.3, 0.0, {0.0, 0.0}, 0.0}, 0.02);
  ross::AssemblyOptions options;
  options.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ross::assemble(model, mesh, options));
  state.counters["vertices"] = static_cast<double>(mesh.vertex_count());
}
BENCHMARK(BM_Assemble)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  const auto model = ross::build_model(kH2);
  const double h = 1.0 / static_cast<double>(state.range(0));
  const auto mesh = ross::mesh_domain(model, ross::Ellipse{0.6, 0.3, 0.0, {0.0, 0.0}, 0.0}, h);
  const auto sys = ross::assemble(model, mesh);
  for (auto _ : state) benchmark::DoNotOptimize(ross::solve_spectrum(sys.stiffness, sys.mass, 3));
  state.counters["vertices"] = static_cast<double>(mesh.vertex_count());
}
BENCHMARK(BM_Spectrum)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Verify(benchmark::State& state) {
  const auto domain = ross::parse_domain("peanut:0.45,0.3", kH2);
  ross::VerifyOptions options;
  options.h = 0.03;
  for (auto _ : state) benchmark::DoNotOptimize(ross::verify(kH2, domain, options));
}
BENCHMARK(BM_Verify)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_Lemmas(benchmark::State& state) {
  const auto space = ross::Space::make(4, 2, true);
  const ross::LemmaOptions options;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ross::check_identity(space, options));
    benchmark::DoNotOptimize(ross::check_gradient_bound(space, options));
    benchmark::DoNotOptimize(ross::check_ball_lower_bound(space, options));
  }
}
BENCHMARK(BM_Lemmas)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
