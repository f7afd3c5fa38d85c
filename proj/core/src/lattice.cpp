#include "gridbus/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "gridbus/errors.hpp"
#include "gridbus/units.hpp"

namespace gridbus {

namespace {

void check_spec(const LatticeSpec& s) {
  if (s.rows < 1 || s.cols < 1)
    throw std::invalid_argument("lattice: rows and cols must be >= 1");
  if (s.d_ph < 2) throw std::invalid_argument("lattice: d_ph must be >= 2");
  if (!s.qubit_active.empty() &&
      static_cast<int>(s.qubit_active.size()) != s.sites())
    throw std::invalid_argument("lattice: qubit_active size mismatch");
}

Eigen::MatrixXcd annihilator_local(int d) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Eigen::MatrixXcd lower_local() {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
  s(0, 1) = 1.0;  // |g><e|
  return s;
}

Eigen::MatrixXcd sz_local() {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
  s(0, 0) = -1.0;
  s(1, 1) = 1.0;
  return s;
}

}  // namespace

std::size_t LatticeSpec::dimension() const {
  check_spec(*this);
  std::size_t dim = 1;
  auto mul = [&](std::size_t f) {
    if (dim > max_dim / f)
      throw NumericError("lattice: dimension exceeds max_dim cap");
    dim *= f;
  };
  for (int s = 0; s < sites(); ++s) {
    mul(static_cast<std::size_t>(d_ph));
    if (active(s)) mul(2);
  }
  return dim;
}

SiteParams SiteParams::uniform(const LatticeSpec& spec, double omega_Z,
                               double nu, double omega_r, double J) {
  SiteParams p;
  p.omega_Z.assign(spec.sites(), omega_Z);
  p.nu.assign(spec.sites(), nu);
  p.omega_r = omega_r;
  p.J = J;
  return p;
}

FactorLayout layout_of(const LatticeSpec& spec) {
  FactorLayout lay;
  lay.dim = spec.dimension();
  lay.res_factor.assign(spec.sites(), -1);
  lay.qb_factor.assign(spec.sites(), -1);
  for (int s = 0; s < spec.sites(); ++s) {
    lay.res_factor[s] = static_cast<int>(lay.dims.size());
    lay.dims.push_back(spec.d_ph);
    if (spec.active(s)) {
      lay.qb_factor[s] = static_cast<int>(lay.dims.size());
      lay.dims.push_back(2);
    }
  }
  lay.strides.assign(lay.dims.size(), 1);
  for (int f = static_cast<int>(lay.dims.size()) - 2; f >= 0; --f)
    lay.strides[f] = lay.strides[f + 1] * lay.dims[f + 1];
  return lay;
}

SpMat embed_factor(const FactorLayout& lay, int factor,
                   const Eigen::MatrixXcd& local) {
  const int d = lay.dims[factor];
  if (local.rows() != d || local.cols() != d)
    throw std::invalid_argument("embed_factor: local dimension mismatch");
  const std::size_t inner = lay.strides[factor];
  const std::size_t outer = lay.dim / (inner * d);

  std::vector<Eigen::Triplet<cplx>> trips;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const cplx v = local(r, c);
      if (v == cplx(0.0)) continue;
      for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t row0 = (o * d + r) * inner;
        const std::size_t col0 = (o * d + c) * inner;
        for (std::size_t i = 0; i < inner; ++i)
          trips.emplace_back(static_cast<int>(row0 + i),
                             static_cast<int>(col0 + i), v);
      }
    }
  SpMat m(static_cast<int>(lay.dim), static_cast<int>(lay.dim));
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

SpMat site_annihilator(const LatticeSpec& spec, int site) {
  const FactorLayout lay = layout_of(spec);
  return embed_factor(lay, lay.res_factor.at(site), annihilator_local(spec.d_ph));
}

SpMat site_lower(const LatticeSpec& spec, int site) {
  const FactorLayout lay = layout_of(spec);
  if (lay.qb_factor.at(site) < 0)
    throw std::invalid_argument("site_lower: qubit factor dropped at this site");
  return embed_factor(lay, lay.qb_factor[site], lower_local());
}

SpMat site_sz(const LatticeSpec& spec, int site) {
  const FactorLayout lay = layout_of(spec);
  if (lay.qb_factor.at(site) < 0)
    throw std::invalid_argument("site_sz: qubit factor dropped at this site");
  return embed_factor(lay, lay.qb_factor[site], sz_local());
}

std::vector<std::pair<int, int>> edge_list(const LatticeSpec& spec) {
  check_spec(spec);
  std::vector<std::pair<int, int>> edges;
  const int N = spec.rows, M = spec.cols;
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < M; ++m) {
      const int s = spec.site_index(n, m);
      if (m + 1 < M) edges.emplace_back(s, spec.site_index(n, m + 1));
      if (n + 1 < N) edges.emplace_back(s, spec.site_index(n + 1, m));
    }
  if (spec.periodic) {
    // wrap edges only when they are not already present (extent > 2)
    if (M > 2)
      for (int n = 0; n < N; ++n)
        edges.emplace_back(spec.site_index(n, M - 1), spec.site_index(n, 0));
    if (N > 2)
      for (int m = 0; m < M; ++m)
        edges.emplace_back(spec.site_index(N - 1, m), spec.site_index(0, m));
  }
  return edges;
}

std::vector<EdgeMultiplicity> hopping_audit(const LatticeSpec& spec) {
  check_spec(spec);
  std::map<std::pair<int, int>, int> directed;
  const int N = spec.rows, M = spec.cols;
  auto visit = [&](int s, int n, int m) {
    if (spec.periodic) {
      directed[{s, spec.site_index(((n - 1) % N + N) % N, m)}]++;
      directed[{s, spec.site_index((n + 1) % N, m)}]++;
      directed[{s, spec.site_index(n, ((m - 1) % M + M) % M)}]++;
      directed[{s, spec.site_index(n, (m + 1) % M)}]++;
    } else {
      if (n > 0) directed[{s, spec.site_index(n - 1, m)}]++;
      if (n + 1 < N) directed[{s, spec.site_index(n + 1, m)}]++;
      if (m > 0) directed[{s, spec.site_index(n, m - 1)}]++;
      if (m + 1 < M) directed[{s, spec.site_index(n, m + 1)}]++;
    }
  };
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < M; ++m) visit(spec.site_index(n, m), n, m);

  std::map<std::pair<int, int>, int> unordered;
  for (const auto& [k, c] : directed) {
    auto key = std::minmax(k.first, k.second);
    if (k.first == k.second)
      unordered[{k.first, k.second}] += c;  // self-pair: count terms directly
    else
      unordered[{key.first, key.second}] += c;
  }
  std::vector<EdgeMultiplicity> out;
  for (const auto& [k, c] : unordered) {
    EdgeMultiplicity e;
    e.a = k.first;
    e.b = k.second;
    e.multiplicity = (k.first == k.second) ? c : c / 2;
    out.push_back(e);
  }
  return out;
}

SpMat build_jch_hamiltonian(const LatticeSpec& spec, const SiteParams& p) {
  check_spec(spec);
  if (static_cast<int>(p.omega_Z.size()) != spec.sites() ||
      static_cast<int>(p.nu.size()) != spec.sites())
    throw std::invalid_argument("build_jch_hamiltonian: per-site array size mismatch");
  const FactorLayout lay = layout_of(spec);

  const int D = static_cast<int>(lay.dim);
  SpMat H(D, D);
  const Eigen::MatrixXcd a_loc = annihilator_local(spec.d_ph);
  const Eigen::MatrixXcd n_loc = a_loc.adjoint() * a_loc;

  for (int s = 0; s < spec.sites(); ++s) {
    H = H + SpMat(p.omega_r * embed_factor(lay, lay.res_factor[s], n_loc));
    if (lay.qb_factor[s] >= 0) {
      H = H + SpMat(0.5 * p.omega_Z[s] *
                    embed_factor(lay, lay.qb_factor[s], sz_local()));
      if (p.nu[s] != 0.0) {
        const SpMat a = embed_factor(lay, lay.res_factor[s], a_loc);
        const SpMat sm = embed_factor(lay, lay.qb_factor[s], lower_local());
        const SpMat asp = SpMat(a * SpMat(sm.adjoint()));
        H = H + SpMat(0.5 * p.nu[s] * asp) +
            SpMat(0.5 * p.nu[s] * SpMat(asp.adjoint()));
      }
    } else if (p.nu[s] != 0.0) {
      throw std::invalid_argument(
          "build_jch_hamiltonian: nonzero nu on a dropped qubit factor");
    }
  }
  for (const auto& [i, j] : edge_list(spec)) {
    const SpMat hop =
        SpMat(SpMat(site_annihilator(spec, i).adjoint()) * site_annihilator(spec, j));
    H = H + SpMat(p.J * hop) + SpMat(p.J * SpMat(hop.adjoint()));
  }
  H.makeCompressed();
  return H;
}

std::pair<SpMat, SpMat> build_drive_term(const LatticeSpec& spec, int site) {
  if (site < 0 || site >= spec.sites())
    throw std::invalid_argument("build_drive_term: site out of bounds");
  SpMat a = site_annihilator(spec, site);
  SpMat ad = SpMat(a.adjoint());
  ad.makeCompressed();
  return {std::move(a), std::move(ad)};
}

std::vector<SpMat> collapse_operators(const LatticeSpec& spec, double kappa,
                                      double gamma) {
  if (kappa < 0.0 || gamma < 0.0)
    throw std::invalid_argument("collapse_operators: negative rate");
  std::vector<SpMat> ops;
  if (kappa > 0.0)
    for (int s = 0; s < spec.sites(); ++s)
      ops.push_back(SpMat(std::sqrt(kappa) * site_annihilator(spec, s)));
  if (gamma > 0.0)
    for (int s = 0; s < spec.sites(); ++s)
      if (spec.active(s))
        ops.push_back(SpMat(std::sqrt(gamma) * site_lower(spec, s)));
  return ops;
}

std::vector<double> fourier_mode_frequencies(const LatticeSpec& spec,
                                             double omega_r, double J) {
  check_spec(spec);
  if (!spec.periodic)
    throw std::invalid_argument(
        "fourier_mode_frequencies: requires a periodic lattice");
  std::vector<double> w;
  w.reserve(spec.sites());
  for (int k = 0; k < spec.rows; ++k)
    for (int l = 0; l < spec.cols; ++l)
      w.push_back(omega_r +
                  2.0 * J *
                      (std::cos(units::twopi * k / spec.rows) +
                       std::cos(units::twopi * l / spec.cols)));
  return w;
}

SpMat number_operator(const LatticeSpec& spec) {
  const FactorLayout lay = layout_of(spec);
  const int D = static_cast<int>(lay.dim);
  SpMat N(D, D);
  const Eigen::MatrixXcd a_loc = annihilator_local(spec.d_ph);
  const Eigen::MatrixXcd n_loc = a_loc.adjoint() * a_loc;
  Eigen::MatrixXcd pe = Eigen::MatrixXcd::Zero(2, 2);
  pe(1, 1) = 1.0;
  for (int s = 0; s < spec.sites(); ++s) {
    N = N + embed_factor(lay, lay.res_factor[s], n_loc);
    if (lay.qb_factor[s] >= 0) N = N + embed_factor(lay, lay.qb_factor[s], pe);
  }
  N.makeCompressed();
  return N;
}

Eigen::MatrixXd single_excitation_block(const LatticeSpec& spec,
                                        const SiteParams& p) {
  check_spec(spec);
  const int S = spec.sites();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * S, 2 * S);
  for (int s = 0; s < S; ++s) {
    H(s, s) = p.omega_r;              // one photon at s
    H(S + s, S + s) = p.omega_Z[s];   // one flipped qubit at s
    H(s, S + s) = H(S + s, s) = 0.5 * p.nu[s];
  }
  for (const auto& [i, j] : edge_list(spec)) {
    H(i, j) += p.J;
    H(j, i) += p.J;
  }
  return H;
}

Eigen::Matrix2cd reduce_to_qubit(const DenseMat& rho, const LatticeSpec& spec,
                                 int site) {
  const FactorLayout lay = layout_of(spec);
  const int f = lay.qb_factor.at(site);
  if (f < 0) throw std::invalid_argument("reduce_to_qubit: factor dropped");
  const std::size_t st = lay.strides[f];
  Eigen::Matrix2cd q = Eigen::Matrix2cd::Zero();
  for (std::size_t i = 0; i < lay.dim; ++i) {
    const int r = static_cast<int>((i / st) % 2);
    const std::size_t base = i - static_cast<std::size_t>(r) * st;
    for (int c = 0; c < 2; ++c)
      q(r, c) += rho(static_cast<int>(i),
                     static_cast<int>(base + static_cast<std::size_t>(c) * st));
  }
  return q;
}

Eigen::Matrix4cd reduce_to_qubit_pair(const DenseMat& rho,
                                      const LatticeSpec& spec, int site_a,
                                      int site_b) {
  const FactorLayout lay = layout_of(spec);
  const int fa = lay.qb_factor.at(site_a);
  const int fb = lay.qb_factor.at(site_b);
  if (fa < 0 || fb < 0)
    throw std::invalid_argument("reduce_to_qubit_pair: factor dropped");
  const std::size_t sa = lay.strides[fa], sb = lay.strides[fb];
  Eigen::Matrix4cd q = Eigen::Matrix4cd::Zero();
  for (std::size_t i = 0; i < lay.dim; ++i) {
    const int ra = static_cast<int>((i / sa) % 2);
    const int rb = static_cast<int>((i / sb) % 2);
    const std::size_t base = i - static_cast<std::size_t>(ra) * sa -
                             static_cast<std::size_t>(rb) * sb;
    for (int ca = 0; ca < 2; ++ca)
      for (int cb = 0; cb < 2; ++cb)
        q(2 * ra + rb, 2 * ca + cb) +=
            rho(static_cast<int>(i),
                static_cast<int>(base + static_cast<std::size_t>(ca) * sa +
                                 static_cast<std::size_t>(cb) * sb));
  }
  return q;
}

std::vector<double> photon_number_diagonal(const LatticeSpec& spec, int site) {
  const FactorLayout lay = layout_of(spec);
  const int f = lay.res_factor.at(site);
  std::vector<double> d(lay.dim);
  for (std::size_t i = 0; i < lay.dim; ++i)
    d[i] = static_cast<double>((i / lay.strides[f]) % lay.dims[f]);
  return d;
}

std::vector<double> sz_diagonal(const LatticeSpec& spec, int site) {
  const FactorLayout lay = layout_of(spec);
  const int f = lay.qb_factor.at(site);
  if (f < 0) throw std::invalid_argument("sz_diagonal: factor dropped");
  std::vector<double> d(lay.dim);
  for (std::size_t i = 0; i < lay.dim; ++i)
    d[i] = ((i / lay.strides[f]) % 2) ? 1.0 : -1.0;
  return d;
}

}  // namespace gridbus
