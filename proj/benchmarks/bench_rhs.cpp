// Hot-path benchmarks: master-equation right-hand side at the working
// problem sizes, the raw sparse-times-dense kernel, and short adaptive
// integrations. Run with --benchmark_min_time=... to tighten timings.

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "gridbus/lattice.hpp"
#include "gridbus/lindblad.hpp"
#include "gridbus/sparse.hpp"
#include "gridbus/units.hpp"

namespace {

using namespace gridbus;

// 2x2 lattice at the given photon truncation; optionally only one qubit
// kept (the spectator-reduced single-qubit problem).
LindbladProblem make_problem(int d_ph, bool reduce, int n_qubits) {
  LatticeSpec spec;
  spec.rows = 2;
  spec.cols = 2;
  spec.d_ph = d_ph;
  if (reduce) {
    spec.qubit_active.assign(4, false);
    for (int i = 0; i < n_qubits; ++i) spec.qubit_active[i] = true;
  }
  const double wz = units::twopi * 14.0;
  const double wr = units::twopi * 13.0;
  SiteParams p = SiteParams::uniform(spec, wz, units::twopi * 0.08, wr,
                                     units::twopi * 0.16);
  for (int s = 0; s < spec.sites(); ++s)
    if (!spec.active(s)) p.nu[s] = 0.0;
  const double kappa = units::twopi * 1e-5;
  return LindbladProblem(spec, p, kappa, kappa, Frame::rotating, wz);
}

DenseMat ground_state(int dim) {
  DenseMat rho = DenseMat::Zero(dim, dim);
  rho(0, 0) = 1.0;
  return rho;
}

void bm_rhs(benchmark::State& state, int d_ph, bool reduce, int n_qubits) {
  LindbladProblem prob = make_problem(d_ph, reduce, n_qubits);
  PulseEnvelope pulse;
  pulse.amplitude = 0.05;
  pulse.center = 25.0;
  pulse.width = 10.0;
  pulse.carrier = units::twopi * 13.0;
  pulse.site = 0;
  prob.set_drive(pulse);
  const int dim = prob.dimension();
  DenseMat rho = ground_state(dim);
  rho(0, 1) = rho(1, 0) = 0.25;
  rho(0, 0) = 0.75;
  rho(1, 1) = 0.25;
  DenseMat out(dim, dim);
  for (auto _ : state) {
    prob.rhs(12.5, rho, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetLabel("dim=" + std::to_string(dim));
}

void BM_rhs_single_reduced(benchmark::State& state) {
  bm_rhs(state, 3, true, 1);  // dim 162
}
void BM_rhs_pair_reduced(benchmark::State& state) {
  bm_rhs(state, 3, true, 2);  // dim 324
}
void BM_rhs_full(benchmark::State& state) {
  bm_rhs(state, 3, false, 4);  // dim 1296
}
void BM_rhs_single_reduced_d4(benchmark::State& state) {
  bm_rhs(state, 4, true, 1);  // dim 512
}

void BM_spmm(benchmark::State& state) {
  const int d_ph = static_cast<int>(state.range(0));
  LatticeSpec spec;
  spec.rows = 2;
  spec.cols = 2;
  spec.d_ph = d_ph;
  SiteParams p = SiteParams::uniform(spec, units::twopi * 14.0,
                                     units::twopi * 0.08,
                                     units::twopi * 13.0,
                                     units::twopi * 0.16);
  SpMat H = build_jch_hamiltonian(spec, p);
  const int dim = static_cast<int>(H.rows());
  DenseMat rho = DenseMat::Random(dim, dim);
  DenseMat out(dim, dim);
  for (auto _ : state) {
    out.noalias() = H * rho;
    benchmark::DoNotOptimize(out.data());
  }
  state.SetLabel("dim=" + std::to_string(dim));
}

void BM_integrate_short(benchmark::State& state) {
  LindbladProblem prob = make_problem(3, true, 1);
  const int dim = prob.dimension();
  DenseMat rho0 = ground_state(dim);
  IntegratorOptions opts;
  opts.rtol = 1e-8;
  opts.atol = 1e-10;
  opts.positivity_sample_dim_cap = 0;  // timing, not auditing
  for (auto _ : state) {
    Trajectory traj = integrate(prob, rho0, 0.0, 1.0, {}, opts);
    benchmark::DoNotOptimize(traj.rho_final.data());
  }
  state.SetLabel("dim=" + std::to_string(dim) + " t=1ns");
}

BENCHMARK(BM_rhs_single_reduced);
BENCHMARK(BM_rhs_pair_reduced);
BENCHMARK(BM_rhs_full);
BENCHMARK(BM_rhs_single_reduced_d4);
BENCHMARK(BM_spmm)->Arg(3)->Arg(4);
BENCHMARK(BM_integrate_short);

}  // namespace

BENCHMARK_MAIN();
