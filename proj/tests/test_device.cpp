#include <cmath>

#include <doctest.h>

#include "gridbus/device.hpp"
#include "gridbus/errors.hpp"
#include "gridbus/units.hpp"

using namespace gridbus;

namespace {
constexpr double kPi = 3.141592653589793;
double GHz(double angular) { return units::GHz_from_angular(angular); }
}  // namespace

TEST_CASE("zero-point motion and spin-orbit length at the working point") {
  const DeviceParams dev = DeviceParams::baseline();
  CHECK(zero_point_fluctuation(dev) ==
        doctest::Approx(165.584245).epsilon(1e-6));
  CHECK(spin_orbit_length(dev, 1.0) ==
        doctest::Approx(634.997019).epsilon(1e-6));
  CHECK(spin_orbit_length(dev, 0.9) ==
        doctest::Approx(705.552243).epsilon(1e-6));
  CHECK(std::isinf(spin_orbit_length(dev, 0.0)));
  // inverse-field scaling
  CHECK(spin_orbit_length(dev, 0.5) ==
        doctest::Approx(2.0 * spin_orbit_length(dev, 1.0)).epsilon(1e-12));
}

TEST_CASE("vacuum field of the full-length bus resonator") {
  const DeviceParams dev = DeviceParams::baseline();
  CHECK(rms_vacuum_field(dev) == doctest::Approx(3.732345).epsilon(1e-6));
}

TEST_CASE("effective qubit parameters at full bias") {
  const DeviceParams dev = DeviceParams::baseline();
  const EffectiveQubitParams q = effective_qubit_params(dev, 1.0);
  CHECK(GHz(q.omega_Z) == doctest::Approx(14.933993356).epsilon(1e-9));
  CHECK(GHz(q.beta) * 1e3 == doctest::Approx(149.435975).epsilon(1e-6));
  CHECK(GHz(q.omega_Z_prime) == doctest::Approx(13.773336919).epsilon(1e-9));
  CHECK(GHz(q.omega_Z - q.omega_Z_prime) ==
        doctest::Approx(1.160656437).epsilon(1e-8));
  CHECK(GHz(q.nu) * 1e3 == doctest::Approx(39.722888).epsilon(1e-7));
  CHECK(GHz(q.chi) * 1e3 == doctest::Approx(3.727310).epsilon(1e-6));
  CHECK(q.delta == doctest::Approx(q.omega_Z_prime - dev.omega_r));
}

TEST_CASE("field dependence of the dressed splitting and coupling") {
  const DeviceParams dev = DeviceParams::baseline();
  const EffectiveQubitParams q9 = effective_qubit_params(dev, 0.9);
  const EffectiveQubitParams q8 = effective_qubit_params(dev, 0.8);
  CHECK(GHz(q9.omega_Z_prime) == doctest::Approx(13.993861642).epsilon(1e-9));
  CHECK(GHz(q8.omega_Z_prime) == doctest::Approx(14.191173236).epsilon(1e-9));
  CHECK(GHz(q9.nu) * 1e3 == doctest::Approx(35.750599).epsilon(1e-7));
  CHECK(GHz(q8.nu) * 1e3 == doctest::Approx(31.778310).epsilon(1e-7));
  CHECK(GHz(q9.chi) * 1e3 == doctest::Approx(1.985062).epsilon(1e-6));
  CHECK(GHz(q8.chi) * 1e3 == doctest::Approx(1.200539).epsilon(1e-6));

  // nu is linear in the bias field; the dressed splitting falls with it
  const EffectiveQubitParams q5 = effective_qubit_params(dev, 0.5);
  const EffectiveQubitParams q10 = effective_qubit_params(dev, 1.0);
  CHECK(q5.nu == doctest::Approx(0.5 * q10.nu).epsilon(1e-12));
  CHECK(q5.omega_Z_prime > q9.omega_Z_prime);
  CHECK(q9.omega_Z_prime > q10.omega_Z_prime);

  // fully off: decoupled, splitting back at the bare value
  const EffectiveQubitParams q0 = effective_qubit_params(dev, 0.0);
  CHECK(q0.nu == 0.0);
  CHECK(q0.chi == 0.0);
  CHECK(q0.omega_Z_prime == doctest::Approx(q0.omega_Z).epsilon(1e-15));
}

TEST_CASE("loaded bus frequency and inter-resonator hop") {
  const DeviceParams dev = DeviceParams::baseline();
  const ResonatorCoupling rc = resonator_coupling_J(dev);
  CHECK(GHz(rc.J_formula) * 1e3 == doctest::Approx(281.900452).epsilon(1e-7));
  CHECK(GHz(rc.omega_loaded) == doctest::Approx(13.065058665).epsilon(1e-9));
  CHECK(rc.omega_loaded < dev.omega_r);
}

TEST_CASE("phase gate duration from the bias-detuning splitting") {
  const DeviceParams dev = DeviceParams::baseline();
  const double T = phase_gate_duration(kPi, dev, 1.0);
  CHECK(T == doctest::Approx(0.430790701).epsilon(1e-8));
  // linear in the angle
  CHECK(phase_gate_duration(kPi / 2, dev, 1.0) ==
        doctest::Approx(T / 2).epsilon(1e-12));
  CHECK_THROWS_AS(phase_gate_duration(kPi, dev, 0.0), NumericError);
}

TEST_CASE("parameter guards reject inverted frequency orderings") {
  DeviceParams dev = DeviceParams::baseline();
  dev.B_perp_T *= 3.0;  // Zeeman above the orbital splitting
  CHECK_THROWS_AS(effective_qubit_params(dev, 1.0), NumericError);

  DeviceParams dev2 = DeviceParams::baseline();
  dev2.omega_h = units::angular_from_GHz(13.0);  // below the bus
  CHECK_THROWS_AS(effective_qubit_params(dev2, 1.0), NumericError);
}
