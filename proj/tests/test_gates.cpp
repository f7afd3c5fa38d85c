#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "gridbus/device.hpp"
#include "gridbus/errors.hpp"
#include "gridbus/gates.hpp"
#include "gridbus/units.hpp"

using namespace gridbus;

namespace {
constexpr double kPi = 3.141592653589793;

GateOptions loss_options() {
  GateOptions opt;
  opt.kappa = units::twopi * 1e-5;  // 2 pi x 10 kHz in 1/ns
  opt.gamma = units::twopi * 1e-5;
  return opt;
}
}  // namespace

TEST_CASE("quadrature rule integrates high-degree polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  REQUIRE(x.size() == 6);
  double sum = 0.0, odd = 0.0, p10 = 0.0;
  for (int i = 0; i < 6; ++i) {
    sum += w[i];
    odd += w[i] * std::pow(x[i], 7);
    p10 += w[i] * std::pow(x[i], 10);
    if (i < 3) CHECK(x[i] == doctest::Approx(-x[5 - i]).epsilon(1e-14));
  }
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(odd) < 1e-15);
  CHECK(p10 == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
}

TEST_CASE("pulse calibration fields are mutually consistent") {
  const DeviceParams dev = DeviceParams::baseline();
  const EffectiveQubitParams q = effective_qubit_params(dev, 0.8);
  const double kappa = units::twopi * 1e-5;
  const DriveParams d = rx_pulse_params(q, kappa, 35.0);

  CHECK(d.pulse.width == doctest::Approx(7.0).epsilon(1e-14));   // T/5
  CHECK(d.pulse.center == doctest::Approx(17.5).epsilon(1e-14)); // T/2
  CHECK(d.nbar ==
        doctest::Approx(d.pulse.amplitude * d.pulse.amplitude /
                        (q.delta * q.delta + kappa * kappa / 4.0))
            .epsilon(1e-12));
  CHECK(d.gamma_phi ==
        doctest::Approx(photon_dephasing_rate(d.nbar, kappa)).epsilon(1e-12));
  CHECK(d.pulse.carrier ==
        doctest::Approx(q.omega_Z_prime + (2.0 * d.nbar + 1.0) * q.chi)
            .epsilon(1e-12));
  CHECK(d.chi == doctest::Approx(q.chi).epsilon(1e-14));

  // pulse area fixes amplitude ~ 1/T
  const DriveParams d2 = rx_pulse_params(q, kappa, 70.0);
  CHECK(d2.pulse.amplitude ==
        doctest::Approx(d.pulse.amplitude / 2.0).epsilon(1e-12));
  // half angle, half amplitude
  const DriveParams dh = rx_pulse_params(q, kappa, 35.0, kPi / 2);
  CHECK(dh.pulse.amplitude ==
        doctest::Approx(d.pulse.amplitude / 2.0).epsilon(1e-12));

  const EffectiveQubitParams off = effective_qubit_params(dev, 0.0);
  CHECK_THROWS_AS(rx_pulse_params(off, kappa, 35.0), ValidationError);
}

TEST_CASE("analytic fidelity bounds") {
  CHECK(analytic_bound_single(0.0, 0.0, 123.0) == doctest::Approx(1.0));
  CHECK(analytic_bound_single(1e-4, 0.0, 100.0) ==
        doctest::Approx(0.99667913202).epsilon(1e-10));
  // dephasing enters through the coherence channel only
  CHECK(analytic_bound_single(0.0, 2e-4, 100.0) ==
        doctest::Approx(0.5 * (1.0 + 1.0 / 3.0 +
                               2.0 / 3.0 * std::exp(-0.02)))
            .epsilon(1e-12));
  CHECK(analytic_bound_two(1e-4, 250.0) ==
        doctest::Approx(std::exp(-0.025)).epsilon(1e-12));
}

TEST_CASE("exchange-gate timing") {
  CHECK(sqrt_iswap_duration(units::twopi * 5e-4) ==
        doctest::Approx(250.0).epsilon(1e-12));
  CHECK(photon_dephasing_rate(0.5, 2e-4) ==
        doctest::Approx(2.0 * 0.5 * 2e-4 * kPi * kPi / 4.0).epsilon(1e-12));
}

TEST_CASE("rotation setup carries the doubled lattice coupling") {
  const DeviceParams dev = DeviceParams::baseline();
  const EffectiveQubitParams q = effective_qubit_params(dev, 0.8);
  GateOptions opt = loss_options();
  const GateSetup setup = setup_rx(dev, 0.8, kPi, 35.0, opt);

  CHECK(setup.ctx.site_params.nu[0] ==
        doctest::Approx(2.0 * q.nu).epsilon(1e-12));
  CHECK(setup.prot.duration == 35.0);
  CHECK(setup.prot.has_pulse);
  // spectators dropped: only the target keeps its qubit factor
  CHECK(setup.ctx.spec.qubit_active == std::vector<bool>{true, false, false,
                                                         false});
  // ideal pi rotation about x
  CHECK(std::abs(setup.prot.ideal(0, 0)) < 1e-12);
  CHECK(std::abs(setup.prot.ideal(0, 1) - cplx(0.0, -1.0)) < 1e-12);

  GateOptions keep = opt;
  keep.reduce_spectators = false;
  const GateSetup full = setup_rx(dev, 0.8, kPi, 35.0, keep);
  CHECK(full.ctx.spec.dimension() == 1296);
}

TEST_CASE("phase-gate setup detunes without touching the bus") {
  const DeviceParams dev = DeviceParams::baseline();
  const GateSetup setup = setup_rz(dev, 1.0, kPi, loss_options());
  CHECK(setup.prot.duration ==
        doctest::Approx(phase_gate_duration(kPi, dev, 1.0)).epsilon(1e-12));
  CHECK_FALSE(setup.prot.has_pulse);
  for (double v : setup.ctx.site_params.nu) CHECK(v == 0.0);
  CHECK(std::abs(setup.prot.ideal(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(setup.prot.ideal(1, 1) - std::polar(1.0, kPi)) < 1e-12);
}

TEST_CASE("exchange setup biases exactly the chosen pair") {
  const DeviceParams dev = DeviceParams::baseline();
  GateOptions opt = loss_options();
  opt.site = 0;
  opt.site_b = 1;
  const GateSetup setup = setup_sqrt_iswap(dev, 0.9, opt);
  CHECK(setup.K_NN > 0.0);
  CHECK(setup.prot.duration ==
        doctest::Approx(sqrt_iswap_duration(setup.K_NN)).epsilon(1e-12));
  const EffectiveQubitParams q = effective_qubit_params(dev, 0.9);
  CHECK(setup.ctx.site_params.nu[0] ==
        doctest::Approx(2.0 * q.nu).epsilon(1e-12));
  CHECK(setup.ctx.site_params.nu[1] ==
        doctest::Approx(2.0 * q.nu).epsilon(1e-12));
  const double c = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(setup.prot.ideal(0, 0) - c) < 1e-12);
  CHECK(std::abs(setup.prot.ideal(1, 0) - cplx(0.0, -c)) < 1e-12);
}

TEST_CASE("phase gate scores near unity through the full pipeline") {
  const DeviceParams dev = DeviceParams::baseline();
  const GateSetup setup = setup_rz(dev, 1.0, kPi, loss_options());
  const FidelityReport rep = bloch_average_fidelity(setup);
  CHECK(rep.F_av > 0.9999);
  CHECK(rep.F_av_opt >= rep.F_av);
  // with the z-phase freed the remaining infidelity is pure decay
  CHECK(std::abs(rep.F_av_opt - rep.bound) < 1e-7);
  CHECK(rep.bound ==
        doctest::Approx(analytic_bound_single(loss_options().gamma, 0.0,
                                              rep.duration))
            .epsilon(1e-12));
  CHECK(rep.node_F.size() == 72);
}

TEST_CASE("channel reconstruction equals the literal node average") {
  const DeviceParams dev = DeviceParams::baseline();
  const GateSetup setup = setup_rz(dev, 1.0, kPi, loss_options());
  const FidelityReport a =
      bloch_average_fidelity(setup, {}, AverageStrategy::process);
  const FidelityReport b =
      bloch_average_fidelity(setup, {}, AverageStrategy::per_node);
  CHECK(a.F_av == doctest::Approx(b.F_av).epsilon(1e-9));
  CHECK(a.F_av_opt == doctest::Approx(b.F_av_opt).epsilon(1e-9));

  // doubling the quadrature leaves the algebraic average unchanged
  const FidelityReport c =
      bloch_average_fidelity(setup, {12, 24}, AverageStrategy::process);
  CHECK(a.F_av == doctest::Approx(c.F_av).epsilon(1e-10));
}

TEST_CASE("noiseless pi pulse swaps the populations") {
  const DeviceParams dev = DeviceParams::baseline();
  GateOptions opt;  // kappa = gamma = 0
  const GateSetup setup = setup_rx(dev, 0.8, kPi, 35.0, opt);
  Trajectory traj = run_gate(setup, Eigen::Vector2cd(1.0, 0.0));
  const Eigen::Matrix2cd q =
      reduce_to_qubit(traj.rho_final, setup.ctx.spec, 0);
  // calibration fixes the carrier at the steady photon load, so the
  // instantaneous Stark excursion tilts the axis by a few per mille
  CHECK(q(1, 1).real() > 0.99);
  CHECK(std::abs(traj.rho_final.trace().real() - 1.0) < 1e-9);
}

TEST_CASE("noiseless exchange reaches the balanced beam-splitter point") {
  const DeviceParams dev = DeviceParams::baseline();
  GateOptions opt;
  const GateSetup setup = setup_sqrt_iswap(dev, 1.0, opt);
  Trajectory traj = run_gate(setup, Eigen::Vector2cd(1.0, 0.0));  // |eg>
  const Eigen::Matrix4cd pair =
      reduce_to_qubit_pair(traj.rho_final, setup.ctx.spec, 0, 1);
  // basis (gg, ge, eg, ee): half the excitation moved across
  CHECK(pair(2, 2).real() == doctest::Approx(0.5).epsilon(0.12));
  CHECK(pair(1, 1).real() == doctest::Approx(0.5).epsilon(0.12));
  CHECK(std::abs(pair(1, 2)) > 0.42);
  CHECK(pair(3, 3).real() < 0.01);
}

TEST_CASE("exchange fidelity is insensitive to the integration frame") {
  const DeviceParams dev = DeviceParams::baseline();
  GateOptions opt;
  const GateSetup a = setup_sqrt_iswap(dev, 1.0, opt);

  GateOptions shifted = opt;
  shifted.frame_omega = 0.5 * (effective_qubit_params(dev, 1.0).omega_Z_prime +
                               dev.omega_r);
  const GateSetup b = setup_sqrt_iswap(dev, 1.0, shifted);

  const Eigen::Vector2cd in(1.0 / std::sqrt(2.0), cplx(0.0, 0.6));
  const Eigen::Vector2cd inn = in.normalized();
  const Eigen::Matrix4cd pa = reduce_to_qubit_pair(
      run_gate(a, inn).rho_final, a.ctx.spec, 0, 1);
  const Eigen::Matrix4cd pb = reduce_to_qubit_pair(
      run_gate(b, inn).rho_final, b.ctx.spec, 0, 1);
  CHECK((pa - pb).norm() < 1e-6);
}

TEST_CASE("sweep rows carry the calibration that produced them") {
  const DeviceParams dev = DeviceParams::baseline();
  GateOptions opt = loss_options();
  const std::vector<GateSweepRow> rows =
      rx_duration_sweep(dev, 0.8, {20.0, 35.0}, opt);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].T_ns == 20.0);
  CHECK(rows[0].sweep_var == 20.0);
  CHECK(rows[1].eps < rows[0].eps);
  CHECK(rows[1].nbar < rows[0].nbar);
  for (const GateSweepRow& r : rows) {
    CHECK(r.F_av > 0.9);
    CHECK(r.F_av < r.F_bound + 0.002);
    CHECK(r.gamma_phi ==
          doctest::Approx(photon_dephasing_rate(r.nbar, opt.kappa))
              .epsilon(1e-12));
  }
}
