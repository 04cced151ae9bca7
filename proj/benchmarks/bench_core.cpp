// Microbenchmarks for the hot paths: mode-matrix construction, sector
// enumeration, sparse operator assembly, the iterative ground-state solve,
// and the Wick-moment evaluation used by the field scans.

#include <benchmark/benchmark.h>

#include <memory>

#include "jtfu/eigensolver.hpp"
#include "jtfu/fock_enr.hpp"
#include "jtfu/gaussian_field.hpp"
#include "jtfu/hg_modes.hpp"
#include "jtfu/minimizer.hpp"
#include "jtfu/operators.hpp"

namespace {

void bm_one_body_matrices(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const jtfu::OneBodyMatrices ob = jtfu::build_one_body_matrices({size, 1.0});
    benchmark::DoNotOptimize(ob.t2.sum());
  }
}
BENCHMARK(bm_one_body_matrices)->Arg(16)->Arg(64)->Arg(256);

void bm_enr_enumeration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) {
    const jtfu::EnrBasis basis(n, m);
    benchmark::DoNotOptimize(basis.dimension());
  }
  state.SetLabel("dim " + std::to_string(jtfu::enr_dimension(n, m)));
}
BENCHMARK(bm_enr_enumeration)->Args({3, 10})->Args({5, 15})->Args({4, 20});

void bm_tau2_assembly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const auto basis = std::make_shared<const jtfu::EnrBasis>(n, m);
  const jtfu::OneBodyMatrices ob = jtfu::build_one_body_matrices({m, 1.0});
  for (auto _ : state) {
    const jtfu::TwoPhotonOperator op = jtfu::assemble_tau2(basis, ob);
    benchmark::DoNotOptimize(op.matrix.nonZeros());
  }
  state.SetLabel("dim " + std::to_string(basis->dimension()));
}
BENCHMARK(bm_tau2_assembly)->Args({2, 10})->Args({3, 10})->Args({4, 12});

void bm_ground_state(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const auto basis = std::make_shared<const jtfu::EnrBasis>(n, m);
  const jtfu::OneBodyMatrices ob = jtfu::build_one_body_matrices({m, 1.0});
  const auto h = jtfu::assemble_uncertainty_hamiltonian(
      jtfu::assemble_tau2(basis, ob), jtfu::assemble_omega2(basis, ob), 0.5);
  jtfu::SolverOptions options;
  for (auto _ : state) {
    const auto pairs = jtfu::lanczos_lowest(h.matrix, 1, options);
    benchmark::DoNotOptimize(pairs[0].eigenvalue);
  }
  state.SetLabel("dim " + std::to_string(basis->dimension()));
}
BENCHMARK(bm_ground_state)->Args({2, 30})->Args({3, 15})->Args({4, 12})
    ->Unit(benchmark::kMillisecond);

void bm_minimize_cell(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) {
    const jtfu::GroundStateResult best = jtfu::minimize_over_xi(n, m);
    benchmark::DoNotOptimize(best.product);
  }
}
BENCHMARK(bm_minimize_cell)->Args({2, 8})->Args({3, 8})
    ->Unit(benchmark::kMillisecond);

void bm_wick_observables(benchmark::State& state) {
  const double target = static_cast<double>(state.range(0));
  const double gain = jtfu::solve_gain_for_mean(0.9, target);
  const jtfu::SchmidtEnsemble ensemble = jtfu::build_ensemble(0.9, gain);
  for (auto _ : state) {
    const jtfu::FieldObservables obs = jtfu::observables(ensemble);
    benchmark::DoNotOptimize(obs.product);
  }
  state.SetLabel(std::to_string(ensemble.squeeze_params.size()) + " modes");
}
BENCHMARK(bm_wick_observables)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
