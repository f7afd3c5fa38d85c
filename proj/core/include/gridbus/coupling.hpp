#pragma once

#include <string>

#include "gridbus/lattice.hpp"

namespace gridbus {

// Virtual-photon-mediated qubit-qubit flip-flop coupling on the periodic
// N x M lattice. Sign convention throughout: delta = omega_Z - omega_r.
//
// Normalization: these formulas take the full coupling nu of a site and
// return K in the nu^2 normalization. A lattice Hamiltonian built with
// per-site parameter nu couples with matrix element nu/2, so the
// flip-flop rate realized by that Hamiltonian is K(nu)/4 (equivalently
// K(nu_element) with nu_element the actual matrix element doubled).
struct CouplingQuery {
  int N = 1, M = 1;
  double delta = 0.0;  // omega_Z - omega_r, rad/ns
  double J = 0.0;      // rad/ns
  double nu = 0.0;     // rad/ns
  int dn = 0, dm = 0;  // site separation
};

struct CouplingResult {
  double K = 0.0;  // rad/ns
  std::string method;
  int order_used = 0;
  double est_error = 0.0;
};

// Direct sum over all N*M lattice momenta:
//   K = (1/NM) sum_{k,l} nu^2 exp(i k.d) / (delta - eps_N(k) - eps_M(l))
// with the per-extent dispersion eps_L(k) = 0 (L=1), J cos(pi k) (L=2),
// 2J cos(2 pi k / L) (L>=3), matching the deduplicated edge set.
// Throws NumericError when some mode is resonant with the qubit.
CouplingResult coupling_exact_fourier(const CouplingQuery& q);

// Closed form of the lowest-order photon path:
//   K = binomial(dn+dm, dn) * (nu^2/delta) * (J/delta)^(dn+dm)
CouplingResult coupling_leading_order(const CouplingQuery& q);

// Infinite-lattice perturbative series, all orders up to max_order photon
// round trips beyond the direct path:
//   K = (nu^2/delta) sum_{r+t<=max_order}
//       (2r+2t+dn+dm)! / (r!(r+dn)! t!(t+dm)!) * (J/delta)^(2r+2t+dn+dm)
// The parity of (dn, dm) picks which powers appear; the method tag
// records it. Requires 2J < |delta|; throws NumericError when the term
// sequence is not decreasing near truncation.
CouplingResult coupling_parity_series(const CouplingQuery& q, int max_order);

struct LambShiftResult {
  double bound = 0.0;  // nu^2 / (|delta| - 4J)
  double exact = 0.0;  // momentum-sum shift on the N x M lattice
};

// Requires |delta| > 4J (band fully detuned).
LambShiftResult lamb_shift_bound(const CouplingQuery& q);

// Diagonalizes the single-excitation block, picks the two eigenstates
// with the largest weight on the queried sites' flipped-qubit basis
// states, and returns half their energy splitting. Requires nu equal
// and nonzero exactly at the two queried sites. Throws NumericError
// ("not dispersive") when either picked state carries < 70% of its
// weight on that pair.
double coupling_oracle_single_excitation(const LatticeSpec& spec,
                                         const SiteParams& p, int site_a,
                                         int site_b);

}  // namespace gridbus
