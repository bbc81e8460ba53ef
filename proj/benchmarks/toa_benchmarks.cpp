#include <benchmark/benchmark.h>

#include "toa/conjugacy.hpp"
#include "toa/dynamics.hpp"
#include "toa/fv_transform.hpp"

namespace {

using namespace toa;

void BM_SolveConstraints(benchmark::State& state) {
  const ExactDiracPair pair = sample_dirac_pair(7);
  const IndexWindow window{-static_cast<int>(state.range(0)), static_cast<int>(state.range(0)),
                           static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_minimal(build_constraints(pair, window)));
  }
}
BENCHMARK(BM_SolveConstraints)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_NumericConjugation(benchmark::State& state) {
  const auto grid = MomentumGrid::symmetric(5.0, static_cast<std::size_t>(state.range(0)));
  const DiracPair pair = to_numeric(sample_dirac_pair(3));
  const PhysParams params = PhysParams::natural();
  SpinorGrid phi = SpinorGrid::zeros(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) phi.upper[k] = std::exp(-std::pow(grid[k] - 2.0, 2));
  for (auto _ : state) benchmark::DoNotOptimize(conjugate_toa_numeric(pair, params, phi));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NumericConjugation)->Arg(2048)->Arg(8192)->Unit(benchmark::kMicrosecond);

void BM_Eigenfunction(benchmark::State& state) {
  const auto grid = MomentumGrid::symmetric(20.0, static_cast<std::size_t>(state.range(0)));
  const PhysParams params = PhysParams::natural();
  for (auto _ : state) {
    benchmark::DoNotOptimize(toa_eigenfunction(1.0, 1, Branch::NonNodal, grid, params));
  }
}
BENCHMARK(BM_Eigenfunction)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_DensityFrame(benchmark::State& state) {
  const auto grid = MomentumGrid::symmetric(20.0, 4096);
  const PhysParams params = PhysParams::natural();
  const SpinorGrid phi =
      toa_eigenfunction(1.0, 1, Branch::NonNodal, grid, params, EigenfunctionOptions{4.0});
  const auto x = linspace(-15.0, 15.0, static_cast<std::size_t>(state.range(0)));
  const std::vector<double> t{1.0};
  for (auto _ : state) benchmark::DoNotOptimize(density_movie(phi, t, x, params));
}
BENCHMARK(BM_DensityFrame)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
