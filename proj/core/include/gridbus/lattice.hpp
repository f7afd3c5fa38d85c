#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gridbus/sparse.hpp"

namespace gridbus {

// N x M array of resonator+qubit cells with photon hopping between
// nearest-neighbor resonators. Tensor-factor ordering: site-major in
// row-major site order, resonator factor before qubit factor at each
// site. Qubit basis per site: index 0 = |g>, index 1 = |e>.
//
// qubit_active lets callers drop qubit factors that provably stay in
// |g> for an entire run (zero coupling, no drive, ground initial state,
// decay fixed point): removing such a factor is an exact restriction of
// the dynamics to its invariant subspace, not an approximation. Default
// keeps every qubit.
struct LatticeSpec {
  int rows = 1;
  int cols = 1;
  bool periodic = false;
  int d_ph = 3;
  std::vector<bool> qubit_active;  // empty = all active
  std::size_t max_dim = std::size_t{1} << 20;

  int sites() const { return rows * cols; }
  int site_index(int n, int m) const { return n * cols + m; }
  bool active(int site) const {
    return qubit_active.empty() || qubit_active[site];
  }
  // computed before any allocation; throws NumericError past max_dim
  std::size_t dimension() const;
};

struct SiteParams {
  std::vector<double> omega_Z;  // rad/ns, per site
  std::vector<double> nu;       // rad/ns, per site; enters H as nu/2
  double omega_r = 0.0;         // rad/ns, uniform
  double J = 0.0;               // rad/ns, uniform hop

  static SiteParams uniform(const LatticeSpec& spec, double omega_Z,
                            double nu, double omega_r, double J);
};

struct FactorLayout {
  std::vector<int> dims;
  std::vector<std::size_t> strides;
  std::vector<int> res_factor;  // site -> factor index
  std::vector<int> qb_factor;   // site -> factor index, -1 if dropped
  std::size_t dim = 0;
};

FactorLayout layout_of(const LatticeSpec& spec);

// Local operator on one tensor factor, embedded in the full space.
SpMat embed_factor(const FactorLayout& lay, int factor,
                   const Eigen::MatrixXcd& local);

SpMat site_annihilator(const LatticeSpec& spec, int site);
SpMat site_lower(const LatticeSpec& spec, int site);   // |g><e|
SpMat site_sz(const LatticeSpec& spec, int site);      // diag(-1,+1)

// Unordered nearest-neighbor edges, each exactly once. Periodic wrap
// edges that coincide with an existing edge (extent 2) are dropped; a
// wrap of extent 1 is a self-loop and never produces an edge.
std::vector<std::pair<int, int>> edge_list(const LatticeSpec& spec);

// Multiplicity each (site,site) pair would receive if every site summed
// over its four directed neighbors: 2 on wrap-doubled edges of extent-2
// rings, self-pairs on extent-1 wraps. first==second marks a self-pair.
struct EdgeMultiplicity {
  int a = 0, b = 0;
  int multiplicity = 0;
};
std::vector<EdgeMultiplicity> hopping_audit(const LatticeSpec& spec);

// H = sum_site [omega_Z/2 sz + omega_r a^dag a + (nu/2)(a sp + a^dag sm)]
//   + J sum_edges (a^dag a' + h.c.)
// using edge_list (each unordered edge once).
SpMat build_jch_hamiltonian(const LatticeSpec& spec, const SiteParams& p);

// Site annihilator/creator pair for drive terms; time dependence is
// applied by the integrator.
std::pair<SpMat, SpMat> build_drive_term(const LatticeSpec& spec, int site);

// sqrt(kappa) a_s for every site and sqrt(gamma) sm_s for every active
// qubit; zero-rate groups are omitted entirely.
std::vector<SpMat> collapse_operators(const LatticeSpec& spec, double kappa,
                                      double gamma);

// omega_kl = omega_r + 2J[cos(2 pi k/N) + cos(2 pi l/M)], k-major.
// Requires a periodic spec. For extents 1 and 2 this reflects the
// undeduplicated directed-neighbor sum (self-pairs and doubled wraps),
// not the deduplicated Hamiltonian; both agree for extents >= 3.
std::vector<double> fourier_mode_frequencies(const LatticeSpec& spec,
                                             double omega_r, double J);

// Total excitation number: sum a^dag a + sum |e><e| over active qubits.
SpMat number_operator(const LatticeSpec& spec);

// H restricted to the single-excitation sector, dimension 2*N*M.
// Basis: one photon at site 0..NM-1 (row-major), then one flipped qubit
// at site 0..NM-1; energies relative to the zero-excitation state.
// Real-symmetric since all couplings are real.
Eigen::MatrixXd single_excitation_block(const LatticeSpec& spec,
                                        const SiteParams& p);

// Partial traces / diagonal maps -------------------------------------

// 2x2 qubit state of one site (basis g,e).
Eigen::Matrix2cd reduce_to_qubit(const DenseMat& rho, const LatticeSpec& spec,
                                 int site);

// 4x4 two-qubit state, basis (g,g),(g,e),(e,g),(e,e) with site_a major.
Eigen::Matrix4cd reduce_to_qubit_pair(const DenseMat& rho,
                                      const LatticeSpec& spec, int site_a,
                                      int site_b);

// Basis-diagonal weights for <a^dag a>_site and <sz>_site expectations.
std::vector<double> photon_number_diagonal(const LatticeSpec& spec, int site);
std::vector<double> sz_diagonal(const LatticeSpec& spec, int site);

}  // namespace gridbus
