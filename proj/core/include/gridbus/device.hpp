#pragma once

#include <string>

namespace gridbus {

// Device-level inputs for a single resonator/qubit cell. Geometry and
// circuit values are SI; frequencies are angular (rad/ns).
struct DeviceParams {
  double mass_ratio = 0.012;      // effective hole mass / m_e
  double omega_h = 0.0;           // orbital confinement, rad/ns
  double omega_r = 0.0;           // bare resonator mode, rad/ns
  double width_m = 0.5e-6;        // field-plate separation W, m
  double length_m = 10e-3;        // resonator length l, m
  double cap_per_len = 0.127e-9;  // distributed capacitance c, F/m
  double g_factor = 5.5;
  double B_perp_T = 0.194;        // out-of-axis magnetic field, T
  double C_c = 14e-15;            // resonator coupling capacitance, F
  double soi_coeff_e_nm2 = 10.0;  // alpha = coeff * E_z, in e*nm^2
  double J_sim = 0.0;             // hopping used in simulations, rad/ns

  static DeviceParams baseline();
};

// Derived per-site qubit model at a given tuning field E_z.
struct EffectiveQubitParams {
  double E_z = 0.0;           // V/um
  double x_zpf_nm = 0.0;      // zero-point motion
  double l_so_nm = 0.0;       // spin-orbit length (inf at E_z=0)
  double beta = 0.0;          // e*E_rms*x_zpf / hbar, rad/ns
  double omega_Z = 0.0;       // bare Zeeman splitting, rad/ns
  double omega_Z_prime = 0.0; // field-renormalized splitting, rad/ns
  double nu = 0.0;            // spin-resonator coupling, rad/ns
  double delta = 0.0;         // omega_Z_prime - omega_r, rad/ns
  double chi = 0.0;           // dispersive shift nu^2/delta, rad/ns
};

struct ResonatorCoupling {
  double J_formula = 0.0;      // 2*omega_r*C_c/(C+4C_c), rad/ns
  double omega_loaded = 0.0;   // omega_r/sqrt(1+4C_c/C), rad/ns
};

// sqrt(hbar / (2 m omega_h)), nm
double zero_point_fluctuation(const DeviceParams& dev);

// hbar^2 / (m * coeff * E_z), nm; E_z in V/um (inf at E_z=0)
double spin_orbit_length(const DeviceParams& dev, double E_z);

// (1/W) * sqrt(hbar omega_r / (2 c l)), V/m.
// The quoted device value requires the factor 2 inside the root (vacuum
// rms convention); without it the result is sqrt(2) larger.
double rms_vacuum_field(const DeviceParams& dev);

// Full chain at tuning field E_z (V/um). Throws NumericError when
// omega_h <= omega_Z or omega_h <= omega_r (perturbative model invalid).
EffectiveQubitParams effective_qubit_params(const DeviceParams& dev, double E_z);

// Capacitive hopping estimate and the loaded resonator frequency.
ResonatorCoupling resonator_coupling_J(const DeviceParams& dev);

// T = theta / (omega_Z'(0) - omega_Z'(E_z_on)), ns. Throws NumericError
// when the detuning vanishes.
double phase_gate_duration(double theta, const DeviceParams& dev, double E_z_on);

}  // namespace gridbus
