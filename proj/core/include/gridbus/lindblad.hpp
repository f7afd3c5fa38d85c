#pragma once

// Lindblad master-equation dynamics on the lattice space.
//
// The right-hand side is evaluated matrix-free: only sparse-times-dense
// products and index gathers touch the density matrix, no superoperator is
// ever materialized.  For a drift G = -iH - (1/2) sum_L L^dag L and a drive
// pattern A (the driven site's annihilator) the derivative of a Hermitian
// rho is assembled as
//
//   B   = (G - i w A - i conj(w) A^dag) rho,   w = eps(t) e^{i delta t}
//   out = B + B^dag + sum_L (L rho L^dag)
//
// which fuses the commutator and the anticommutator halves into a single
// sparse pass plus one adjoint accumulation.  delta is the drive carrier
// in the active frame; in a frame co-rotating with the drive it is zero
// and the drive term is static.
//
// Time is in nanoseconds, all frequencies angular (rad/ns).

#include <cstdint>
#include <limits>
#include <vector>

#include "gridbus/lattice.hpp"
#include "gridbus/sparse.hpp"

namespace gridbus {

// Gaussian drive pulse applied to one site's resonator.
// envelope(t) = amplitude * exp(-(t - center)^2 / (2 width^2)),
// carrier is the lab-frame drive frequency.
struct PulseEnvelope {
  double amplitude = 0.0;  // rad/ns
  double center = 0.0;     // ns
  double width = 0.0;      // ns; must be > 0 when amplitude != 0
  double carrier = 0.0;    // rad/ns
  int site = 0;

  double envelope(double t) const;
};

// Global rotating-frame choice. `rotating` subtracts omega from every
// excitation (photon and qubit alike) and shifts the drive carrier by
// -omega; `lab` leaves both untouched.
enum class Frame { lab, rotating };

struct IntegratorOptions {
  enum class Method { dop853, dormand_prince54 };
  Method method = Method::dop853;
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double first_step = 0.0;  // 0 selects automatically
  std::uint64_t max_steps = 100'000'000;

  // Diagnostics. Trace renormalization stays off so drift remains visible.
  bool renormalize_trace = false;
  double rhs_trace_tol = 1e-12;  // |tr(drho/dt)| per accepted step
  double trace_tol = 1e-8;       // |tr(rho) - 1|
  double herm_tol = 1e-10;       // Frobenius rho - rho^dag at samples
  double positivity_tol = 1e-6;  // most negative admissible eigenvalue
  // Eigen-decomposition checks run at the final state always and at
  // sample times while dim <= this cap (cubic cost).
  int positivity_sample_dim_cap = 256;
};

// Expectations and health measures recorded at one sample time.
struct SampleRecord {
  double t = 0.0;
  double trace = 0.0;        // Re tr(rho)
  double purity = 0.0;       // tr(rho^2) for a Hermitian rho
  double herm_defect = 0.0;  // ||rho - rho^dag||_F
  Eigen::VectorXd photons;   // <a^dag a> per site, row-major site order
  Eigen::VectorXd sz;        // <sigma^z> per site; dropped qubits report -1
};

struct IntegrationStats {
  std::uint64_t n_steps = 0;
  std::uint64_t n_rhs = 0;
  std::uint64_t n_rejected = 0;
  double max_rhs_trace = 0.0;    // max |tr(drho/dt)| seen
  double max_trace_err = 0.0;    // max |tr(rho) - 1| over accepted steps
  double max_herm_defect = 0.0;  // max over samples
  double min_final_eig = 0.0;    // smallest eigenvalue of the final state
};

struct Trajectory {
  DenseMat rho_final;
  double t_final = 0.0;
  std::vector<SampleRecord> samples;
  IntegrationStats stats;
};

// Prepared lattice problem: drift, collapse gathers, optional drive.
// kappa is the per-resonator photon loss rate, gamma the qubit decay rate
// (both plain rates, 1/ns).
class LindbladProblem {
 public:
  LindbladProblem(const LatticeSpec& spec, const SiteParams& p, double kappa,
                  double gamma, Frame frame = Frame::rotating,
                  double frame_omega = 0.0);

  void set_drive(const PulseEnvelope& pulse);

  // out = -i[H + H_d(t), rho] + kappa sum D[a] + gamma sum D[sigma-].
  void rhs(double t, const DenseMat& rho, DenseMat& out) const;

  int dimension() const { return dim_; }
  const FactorLayout& layout() const { return layout_; }
  const LatticeSpec& spec() const { return spec_; }
  Frame frame() const { return frame_; }
  double frame_omega() const { return frame_omega_; }

  // Drive carrier as seen in the active frame.
  double carrier_in_frame() const;
  bool has_drive() const { return has_drive_; }
  const PulseEnvelope& pulse() const { return pulse_; }

  // Diagonal weights for the recorded expectations.
  const std::vector<Eigen::VectorXd>& photon_diagonals() const {
    return photon_diag_;
  }
  const std::vector<Eigen::VectorXd>& sz_diagonals() const { return sz_diag_; }

 private:
  struct MergedDrift {
    // Value channels aligned with the union pattern held in work_, so the
    // per-call matrix (G - i w A - i conj(w) A^dag) is a value refresh,
    // never a pattern rebuild.
    std::vector<cplx> g_val, a_val, ad_val;
  };

  void rebuild_merged();
  void refresh_values(cplx w) const;

  LatticeSpec spec_;
  FactorLayout layout_;
  int dim_ = 0;
  Frame frame_ = Frame::rotating;
  double frame_omega_ = 0.0;
  bool has_drive_ = false;
  PulseEnvelope pulse_;

  SpMat drift_;  // G = -iH - (1/2) sum L^dag L
  MergedDrift merged_;
  mutable SpMat work_;      // union pattern, values refreshed per rhs call
  mutable DenseMat b_;      // one-sided product buffer
  std::vector<CollapseMap> gathers_;
  std::vector<Eigen::VectorXd> photon_diag_, sz_diag_;
};

// Direct contract form used by tests and small problems: H is the full
// (possibly time-dependent, pre-evaluated) Hamiltonian, collapse the raw
// operator list. Throws ValidationError on dimension mismatch.
void lindblad_rhs(const SpMat& H, const std::vector<SpMat>& collapse,
                  const DenseMat& rho, DenseMat& out);

// Rotating-frame transform of a lattice Hamiltonian: H - omega N_tot with
// N_tot the total excitation number. omega = 0 is the identity.
SpMat apply_frame(const SpMat& H, double omega, const LatticeSpec& spec);

// Adaptive embedded Runge-Kutta integration (Dormand-Prince 8(5,3) by
// default, 5(4) as the cross-check method). Steps clamp to the requested
// sample times; expectations are recorded there. Throws NumericError on
// step underflow, non-finite states, positivity violation beyond
// tolerance, or step-budget exhaustion.
Trajectory integrate(const LindbladProblem& problem, const DenseMat& rho0,
                     double t0, double t1, std::vector<double> sample_times,
                     const IntegratorOptions& opts = {});

}  // namespace gridbus
