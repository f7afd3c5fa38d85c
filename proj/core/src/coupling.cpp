#include "gridbus/coupling.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "gridbus/errors.hpp"
#include "gridbus/units.hpp"

namespace gridbus {

namespace {

void check_query(const CouplingQuery& q) {
  if (q.N < 1 || q.M < 1) throw std::invalid_argument("coupling: N, M >= 1");
  if (q.dn < 0 || q.dm < 0 || q.dn >= q.N || q.dm >= q.M)
    throw std::invalid_argument("coupling: separation outside lattice");
  if (q.delta == 0.0) throw std::invalid_argument("coupling: delta = 0");
}

double dispersion(int L, int k, double J) {
  if (L == 1) return 0.0;
  if (L == 2) return J * std::cos(units::twopi * 0.5 * k);  // +-J
  return 2.0 * J * std::cos(units::twopi * k / L);
}

double mode_phase(int L, int k, int d) {
  if (L == 1) return 0.0;
  if (L == 2) return units::twopi * 0.5 * k * d;
  return units::twopi * static_cast<double>(k) * d / L;
}

std::string parity_tag(const CouplingQuery& q) {
  const bool n_odd = q.dn % 2, m_odd = q.dm % 2;
  std::string t = "series ";
  t += n_odd ? "odd" : "even";
  t += "-";
  t += m_odd ? "odd" : "even";
  return t;
}

}  // namespace

CouplingResult coupling_exact_fourier(const CouplingQuery& q) {
  check_query(q);
  std::complex<double> sum = 0.0;
  for (int k = 0; k < q.N; ++k)
    for (int l = 0; l < q.M; ++l) {
      const double denom =
          q.delta - dispersion(q.N, k, q.J) - dispersion(q.M, l, q.J);
      if (std::abs(denom) < 1e-12 * std::abs(q.delta)) {
        std::ostringstream os;
        os << "coupling_exact_fourier: mode (" << k << "," << l
           << ") resonant with the qubit";
        throw NumericError(os.str());
      }
      const double phase = mode_phase(q.N, k, q.dn) + mode_phase(q.M, l, q.dm);
      sum += std::exp(std::complex<double>(0.0, phase)) / denom;
    }
  sum *= q.nu * q.nu / (q.N * q.M);
  if (std::abs(sum.imag()) > 1e-12 * std::max(1e-300, std::abs(sum)))
    throw NumericError("coupling_exact_fourier: nonreal result");
  CouplingResult r;
  r.K = sum.real();
  r.method = "exact-fourier";
  return r;
}

CouplingResult coupling_leading_order(const CouplingQuery& q) {
  check_query(q);
  const int d = q.dn + q.dm;
  double binom;
  if (d <= 20) {
    // exact integer evaluation
    unsigned long long b = 1;
    for (int i = 1; i <= q.dn; ++i) b = b * (d - q.dn + i) / i;
    binom = static_cast<double>(b);
  } else {
    binom = std::exp(std::lgamma(d + 1.0) - std::lgamma(q.dn + 1.0) -
                     std::lgamma(q.dm + 1.0));
  }
  CouplingResult r;
  r.K = binom * (q.nu * q.nu / q.delta) * std::pow(q.J / q.delta, d);
  r.method = "leading-order";
  r.order_used = 0;
  return r;
}

CouplingResult coupling_parity_series(const CouplingQuery& q, int max_order) {
  check_query(q);
  if (max_order < 0) throw std::invalid_argument("series: max_order < 0");
  if (2.0 * std::abs(q.J) >= std::abs(q.delta))
    throw NumericError("coupling_parity_series: requires 2J < |delta|");

  const double x = q.J / q.delta;
  double total = 0.0;
  double ring_prev = 0.0, ring_last = 0.0;
  // lgamma is exact enough here; terms stay far below overflow
  auto term = [&](int r, int t) {
    const int p = 2 * r + 2 * t + q.dn + q.dm;
    const double lw = std::lgamma(p + 1.0) - std::lgamma(r + 1.0) -
                      std::lgamma(r + q.dn + 1.0) - std::lgamma(t + 1.0) -
                      std::lgamma(t + q.dm + 1.0);
    return std::exp(lw) * std::pow(x, p);
  };
  for (int s = 0; s <= max_order; ++s) {
    double ring = 0.0;
    for (int r = 0; r <= s; ++r) ring += term(r, s - r);
    total += ring;
    ring_prev = ring_last;
    ring_last = ring;
  }
  if (max_order >= 2 && std::abs(ring_last) > std::abs(ring_prev))
    throw NumericError("coupling_parity_series: terms not decreasing (outside convergence)");

  CouplingResult r;
  r.K = (q.nu * q.nu / q.delta) * total;
  r.method = parity_tag(q);
  r.order_used = max_order;
  r.est_error = std::abs((q.nu * q.nu / q.delta) * ring_last);
  return r;
}

LambShiftResult lamb_shift_bound(const CouplingQuery& q) {
  check_query(q);
  if (std::abs(q.delta) <= 4.0 * std::abs(q.J))
    throw NumericError("lamb_shift_bound: requires |delta| > 4J");
  LambShiftResult r;
  r.bound = q.nu * q.nu / (std::abs(q.delta) - 4.0 * std::abs(q.J));
  CouplingQuery self = q;
  self.dn = self.dm = 0;
  r.exact = coupling_exact_fourier(self).K;
  return r;
}

double coupling_oracle_single_excitation(const LatticeSpec& spec,
                                         const SiteParams& p, int site_a,
                                         int site_b) {
  if (site_a == site_b)
    throw std::invalid_argument("oracle: need two distinct sites");
  for (int s = 0; s < spec.sites(); ++s)
    if (s != site_a && s != site_b && p.nu[s] != 0.0)
      throw std::invalid_argument("oracle: nu must vanish off the queried pair");
  if (p.nu[site_a] != p.nu[site_b])
    throw std::invalid_argument("oracle: queried couplings must be equal");
  if (p.nu[site_a] == 0.0) return 0.0;  // decoupled pair, no splitting

  const Eigen::MatrixXd H = single_excitation_block(spec, p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const int S = spec.sites();
  const int ia = S + site_a, ib = S + site_b;

  // two eigenstates with the largest weight on the queried qubit pair
  int best1 = -1, best2 = -1;
  double w1 = -1.0, w2 = -1.0;
  for (int i = 0; i < H.rows(); ++i) {
    const auto v = es.eigenvectors().col(i);
    const double w = v(ia) * v(ia) + v(ib) * v(ib);
    if (w > w1) {
      w2 = w1; best2 = best1;
      w1 = w; best1 = i;
    } else if (w > w2) {
      w2 = w; best2 = i;
    }
  }
  if (w1 < 0.7 || w2 < 0.7)
    throw NumericError("coupling_oracle_single_excitation: not dispersive");
  return 0.5 * std::abs(es.eigenvalues()(best1) - es.eigenvalues()(best2));
}

}  // namespace gridbus
