#include "gridbus/device.hpp"

#include <cmath>
#include <limits>

#include "gridbus/errors.hpp"
#include "gridbus/units.hpp"

namespace gridbus {

using namespace units;

DeviceParams DeviceParams::baseline() {
  DeviceParams d;
  d.omega_h = angular_from_GHz(28.0);
  d.omega_r = angular_from_GHz(13.35);
  d.J_sim = angular_from_GHz(0.159);
  return d;
}

double zero_point_fluctuation(const DeviceParams& dev) {
  const double m = dev.mass_ratio * m_e_SI;
  const double omega_h_SI = dev.omega_h * 1e9;  // rad/s
  const double x = std::sqrt(hbar_SI / (2.0 * m * omega_h_SI));  // m
  return x * 1e9;
}

double spin_orbit_length(const DeviceParams& dev, double E_z) {
  if (E_z == 0.0) return std::numeric_limits<double>::infinity();
  const double m = dev.mass_ratio * m_e_SI;
  // coeff in e*nm^2: alpha = coeff * E_z has units J*m when E_z is V/m
  const double coeff_SI = dev.soi_coeff_e_nm2 * e_SI * 1e-18;  // C*m^2
  const double alpha = coeff_SI * (E_z * 1e6);                 // J*m
  const double l = hbar_SI * hbar_SI / (m * alpha);            // m
  return l * 1e9;
}

double rms_vacuum_field(const DeviceParams& dev) {
  const double omega_r_SI = dev.omega_r * 1e9;
  return std::sqrt(hbar_SI * omega_r_SI /
                   (2.0 * dev.cap_per_len * dev.length_m)) /
         dev.width_m;
}

EffectiveQubitParams effective_qubit_params(const DeviceParams& dev, double E_z) {
  EffectiveQubitParams p;
  p.E_z = E_z;
  p.x_zpf_nm = zero_point_fluctuation(dev);
  p.l_so_nm = spin_orbit_length(dev, E_z);

  const double omega_Z_SI = dev.g_factor * mu_B_SI * dev.B_perp_T / hbar_SI;
  p.omega_Z = per_ns_from_per_s(omega_Z_SI);
  if (dev.omega_h <= p.omega_Z || dev.omega_h <= dev.omega_r)
    throw NumericError("effective_qubit_params: omega_h must exceed omega_Z and omega_r");

  const double E_rms = rms_vacuum_field(dev);  // V/m
  const double beta_SI = e_SI * E_rms * (p.x_zpf_nm * 1e-9) / hbar_SI;  // rad/s
  p.beta = per_ns_from_per_s(beta_SI);

  const double ratio = (E_z == 0.0) ? 0.0 : p.x_zpf_nm / p.l_so_nm;
  p.omega_Z_prime =
      p.omega_Z * (1.0 - p.omega_Z / (dev.omega_h - p.omega_Z) * ratio * ratio);
  p.nu = p.beta * p.omega_Z / (dev.omega_h - dev.omega_r) * ratio;
  p.delta = p.omega_Z_prime - dev.omega_r;
  p.chi = (p.nu == 0.0) ? 0.0 : p.nu * p.nu / p.delta;
  return p;
}

ResonatorCoupling resonator_coupling_J(const DeviceParams& dev) {
  const double C = dev.cap_per_len * dev.length_m;
  ResonatorCoupling rc;
  rc.J_formula = 2.0 * dev.omega_r * dev.C_c / (C + 4.0 * dev.C_c);
  rc.omega_loaded = dev.omega_r / std::sqrt(1.0 + 4.0 * dev.C_c / C);
  return rc;
}

double phase_gate_duration(double theta, const DeviceParams& dev, double E_z_on) {
  const EffectiveQubitParams on = effective_qubit_params(dev, E_z_on);
  const double d_omega = on.omega_Z - on.omega_Z_prime;
  if (d_omega <= 0.0)
    throw NumericError("phase_gate_duration: zero detuning (E_z_on = 0?)");
  return theta / d_omega;
}

}  // namespace gridbus
