#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "gridbus/lattice.hpp"
#include "gridbus/sparse.hpp"
#include "gridbus/units.hpp"

using namespace gridbus;

namespace {

LatticeSpec spec_2x2(int d_ph = 3) {
  LatticeSpec s;
  s.rows = 2;
  s.cols = 2;
  s.d_ph = d_ph;
  return s;
}

SiteParams generic_params(const LatticeSpec& spec) {
  SiteParams p = SiteParams::uniform(spec, units::twopi * 14.2,
                                     units::twopi * 0.07,
                                     units::twopi * 13.1,
                                     units::twopi * 0.16);
  for (int s = 0; s < spec.sites(); ++s)
    if (!spec.active(s)) p.nu[s] = 0.0;
  return p;
}

double frob(const DenseMat& m) { return m.norm(); }

}  // namespace

TEST_CASE("factor layout dimensions and strides") {
  LatticeSpec s = spec_2x2(3);
  CHECK(s.dimension() == 1296);  // 3^4 * 2^4

  s.qubit_active = {true, false, false, false};
  CHECK(s.dimension() == 162);  // 3^4 * 2

  const FactorLayout lay = layout_of(s);
  CHECK(lay.dim == 162);
  CHECK(lay.qb_factor[0] >= 0);
  CHECK(lay.qb_factor[1] == -1);
  std::size_t prod = 1;
  for (int d : lay.dims) prod *= static_cast<std::size_t>(d);
  CHECK(prod == lay.dim);
  // strides consistent with dims: last factor fastest
  for (std::size_t f = 0; f + 1 < lay.dims.size(); ++f)
    CHECK(lay.strides[f] ==
          lay.strides[f + 1] * static_cast<std::size_t>(lay.dims[f + 1]));
}

TEST_CASE("dimension cap rejects runaway spaces") {
  LatticeSpec s;
  s.rows = 8;
  s.cols = 8;
  s.d_ph = 6;
  CHECK_THROWS(s.dimension());
}

TEST_CASE("truncated ladder commutator deviates only at the top level") {
  LatticeSpec s;
  s.rows = 1;
  s.cols = 1;
  s.d_ph = 5;
  s.qubit_active = {false};
  const SpMat a = site_annihilator(s, 0);
  const DenseMat comm = DenseMat(a * SpMat(a.adjoint())) -
                        DenseMat(SpMat(a.adjoint()) * a);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(comm(k, k) - 1.0) < 1e-14);
  CHECK(std::abs(comm(4, 4) - (1.0 - 5.0)) < 1e-14);
}

TEST_CASE("operators on different sites commute") {
  LatticeSpec s;
  s.rows = 1;
  s.cols = 2;
  s.d_ph = 3;
  const SpMat a0 = site_annihilator(s, 0);
  const SpMat a1 = site_annihilator(s, 1);
  const SpMat m0 = site_lower(s, 0);
  CHECK(frob(DenseMat(a0 * a1) - DenseMat(a1 * a0)) < 1e-14);
  CHECK(frob(DenseMat(a1 * m0) - DenseMat(m0 * a1)) < 1e-14);
}

TEST_CASE("diagonal maps match their operators") {
  LatticeSpec s;
  s.rows = 1;
  s.cols = 2;
  s.d_ph = 3;
  const std::vector<double> nd = photon_number_diagonal(s, 1);
  const DenseMat num =
      DenseMat(SpMat(site_annihilator(s, 1).adjoint()) *
               site_annihilator(s, 1));
  const std::vector<double> zd = sz_diagonal(s, 0);
  const DenseMat zop = DenseMat(site_sz(s, 0));
  for (std::size_t i = 0; i < nd.size(); ++i) {
    CHECK(nd[i] == doctest::Approx(num(i, i).real()).epsilon(1e-14));
    CHECK(zd[i] == doctest::Approx(zop(i, i).real()).epsilon(1e-14));
  }
}

TEST_CASE("edge lists count each bond once") {
  CHECK(edge_list(spec_2x2()).size() == 4);

  LatticeSpec s3;
  s3.rows = 3;
  s3.cols = 3;
  CHECK(edge_list(s3).size() == 12);

  LatticeSpec chain;
  chain.rows = 1;
  chain.cols = 2;
  CHECK(edge_list(chain).size() == 1);

  LatticeSpec ring;
  ring.rows = 1;
  ring.cols = 4;
  ring.periodic = true;
  CHECK(edge_list(ring).size() == 4);

  // extent-2 wrap coincides with the open bond and is dropped
  LatticeSpec two;
  two.rows = 1;
  two.cols = 2;
  two.periodic = true;
  CHECK(edge_list(two).size() == 1);
}

TEST_CASE("hopping audit flags wrap-doubled bonds") {
  // periodic 1x2: the cross bond is wrap-doubled and the extent-1 axis
  // wraps every site onto itself
  LatticeSpec two;
  two.rows = 1;
  two.cols = 2;
  two.periodic = true;
  const auto audit = hopping_audit(two);
  REQUIRE(audit.size() == 3);
  int self_pairs = 0;
  for (const auto& e : audit) {
    CHECK(e.multiplicity == 2);
    if (e.a == e.b) ++self_pairs;
  }
  CHECK(self_pairs == 2);

  const auto open_audit = hopping_audit(spec_2x2());
  for (const auto& e : open_audit) CHECK(e.multiplicity == 1);
}

TEST_CASE("hamiltonian scales linearly with every frequency") {
  LatticeSpec s;
  s.rows = 1;
  s.cols = 2;
  s.d_ph = 3;
  SiteParams p = generic_params(s);
  SiteParams p2 = p;
  const double scale = 2.718281828;
  for (double& w : p2.omega_Z) w *= scale;
  for (double& v : p2.nu) v *= scale;
  p2.omega_r *= scale;
  p2.J *= scale;
  const DenseMat h1 = DenseMat(build_jch_hamiltonian(s, p)) * scale;
  const DenseMat h2 = DenseMat(build_jch_hamiltonian(s, p2));
  CHECK(frob(h1 - h2) < 1e-10 * frob(h2));
}

TEST_CASE("hamiltonian is hermitian and excitation conserving") {
  LatticeSpec s = spec_2x2(3);
  const SiteParams p = generic_params(s);
  const SpMat H = build_jch_hamiltonian(s, p);
  const SpMat N = number_operator(s);
  CHECK(frob(DenseMat(H) - DenseMat(H).adjoint()) < 1e-12);
  CHECK(frob(DenseMat(H * N) - DenseMat(N * H)) < 1e-10);
}

TEST_CASE("decoupled photon sector reproduces the travelling-mode table") {
  // mode table and deduplicated bonds agree only for extents >= 3
  LatticeSpec s;
  s.rows = 3;
  s.cols = 4;
  s.d_ph = 2;
  s.periodic = true;
  SiteParams p = SiteParams::uniform(s, units::twopi * 20.0, 0.0,
                                     units::twopi * 13.0,
                                     units::twopi * 0.2);
  const Eigen::MatrixXd block = single_excitation_block(s, p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);

  std::vector<double> expected = fourier_mode_frequencies(s, p.omega_r, p.J);
  for (int i = 0; i < s.sites(); ++i) expected.push_back(p.omega_Z[i]);
  std::sort(expected.begin(), expected.end());

  Eigen::VectorXd got = es.eigenvalues();
  std::vector<double> got_v(got.data(), got.data() + got.size());
  std::sort(got_v.begin(), got_v.end());
  REQUIRE(got_v.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(got_v[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("qubit reductions recover embedded product states") {
  LatticeSpec s;
  s.rows = 1;
  s.cols = 2;
  s.d_ph = 2;
  const FactorLayout lay = layout_of(s);
  const cplx c0(0.6, 0.0), c1(0.0, 0.8);

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(lay.dim);
  // vacuum photons, qubit 1 in |g>, qubit 0 in c0|g> + c1|e>
  psi(0) = c0;
  psi(lay.strides[lay.qb_factor[0]]) = c1;
  const DenseMat rho = psi * psi.adjoint();

  const Eigen::Matrix2cd q0 = reduce_to_qubit(rho, s, 0);
  CHECK(std::abs(q0(0, 0) - c0 * std::conj(c0)) < 1e-14);
  CHECK(std::abs(q0(1, 1) - c1 * std::conj(c1)) < 1e-14);
  CHECK(std::abs(q0(0, 1) - c0 * std::conj(c1)) < 1e-14);

  const Eigen::Matrix4cd pair = reduce_to_qubit_pair(rho, s, 0, 1);
  // site 0 major: |eg> is row 2
  CHECK(std::abs(pair(2, 2) - c1 * std::conj(c1)) < 1e-14);
  CHECK(std::abs(pair(0, 0) - c0 * std::conj(c0)) < 1e-14);
  CHECK(std::abs(pair(2, 0) - c1 * std::conj(c0)) < 1e-14);
  CHECK(std::abs(pair(3, 3)) < 1e-14);
  CHECK(std::abs(pair.trace() - 1.0) < 1e-14);
}
