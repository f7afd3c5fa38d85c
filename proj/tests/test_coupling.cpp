#include <cmath>

#include <doctest.h>

#include "gridbus/coupling.hpp"
#include "gridbus/errors.hpp"
#include "gridbus/lattice.hpp"
#include "gridbus/units.hpp"

using namespace gridbus;

namespace {

CouplingQuery normalized(int N, int M, double J, int dn, int dm) {
  CouplingQuery q;
  q.N = N;
  q.M = M;
  q.delta = 1.0;
  q.nu = 1.0;
  q.J = J;
  q.dn = dn;
  q.dm = dm;
  return q;
}

}  // namespace

TEST_CASE("exact momentum sum at a frozen reference point") {
  // 8x8, 2J/delta = 0.2, nearest neighbour
  const CouplingQuery q = normalized(8, 8, 0.1, 1, 0);
  const CouplingResult r = coupling_exact_fourier(q);
  CHECK(r.K == doctest::Approx(1.101411142924467e-01).epsilon(1e-12));
}

TEST_CASE("parity series approaches the exact sum") {
  // 16x16 is converged to ~1e-13 relative; 8x8 still differs at ~1e-7
  const CouplingQuery q = normalized(16, 16, 0.05, 1, 1);
  const double exact = coupling_exact_fourier(q).K;
  CHECK(exact == doctest::Approx(5.154845978156e-03).epsilon(1e-10));
  CHECK(coupling_parity_series(q, 5).K ==
        doctest::Approx(5.154845971633e-03).epsilon(1e-10));
  // order 14 on a large block: deep agreement
  const CouplingQuery big = normalized(32, 32, 0.1, 2, 1);
  const double ratio =
      coupling_parity_series(big, 14).K / coupling_exact_fourier(big).K;
  CHECK(std::abs(ratio - 1.0) < 1e-5);
}

TEST_CASE("parity series diverges outside its window") {
  CHECK_THROWS_AS(coupling_parity_series(normalized(8, 8, 0.6, 1, 0), 8),
                  NumericError);
}

TEST_CASE("leading order is the single-path binomial walk") {
  // (J/delta)^(dn+dm) with the path-count binomial prefactor
  const CouplingResult r10 =
      coupling_leading_order(normalized(8, 8, 0.1, 1, 0));
  CHECK(r10.K == doctest::Approx(0.1).epsilon(1e-14));
  const CouplingResult r21 =
      coupling_leading_order(normalized(8, 8, 0.1, 2, 1));
  CHECK(r21.K == doctest::Approx(3.0 * 1e-3).epsilon(1e-14));
  // nu^2/delta scaling
  CouplingQuery q = normalized(8, 8, 0.1, 1, 0);
  q.nu = 3.0;
  q.delta = 2.0;
  CHECK(coupling_leading_order(q).K ==
        doctest::Approx(9.0 / 2.0 * 0.05).epsilon(1e-14));
}

TEST_CASE("leading order error shrinks with the hop ratio") {
  double prev_err = 1e9;
  for (double J : {0.15, 0.10, 0.05, 0.025}) {
    const CouplingQuery q = normalized(16, 16, J, 1, 1);
    const double exact = coupling_exact_fourier(q).K;
    const double err =
        std::abs(coupling_leading_order(q).K / exact - 1.0);
    CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("momentum resonance is rejected, not averaged over") {
  // delta sits on a lattice mode: 4x4 has eps in {-0.4,-0.2,0,0.2,0.4}
  // for 2J = 0.2, so delta = 0.2 collides
  CouplingQuery q = normalized(4, 4, 0.1, 1, 0);
  q.delta = 0.2;
  CHECK_THROWS_AS(coupling_exact_fourier(q), NumericError);
}

TEST_CASE("self-shift bound dominates the exact value") {
  const CouplingQuery q = normalized(8, 8, 0.1, 1, 0);
  const LambShiftResult ls = lamb_shift_bound(q);
  CHECK(std::abs(ls.exact) <= ls.bound);
  CHECK(ls.bound == doctest::Approx(1.0 / 0.6).epsilon(1e-14));

  CouplingQuery tight = q;
  tight.J = 0.3;  // |delta| = 4J exactly
  tight.delta = 1.2;
  CHECK_THROWS_AS(lamb_shift_bound(tight), NumericError);
}

TEST_CASE("spectral oracle agrees with the exact sum when deep dispersive") {
  // two-resonator strip; oracle diagonalizes the one-excitation block
  const double nu_phys = units::twopi * 1e-3;
  const double J = units::twopi * 0.05;
  const double delta = units::twopi * 0.5;
  const double omega_r = units::twopi * 13.0;

  LatticeSpec s;
  s.rows = 1;
  s.cols = 2;
  SiteParams p = SiteParams::uniform(s, omega_r + delta, 2.0 * nu_phys,
                                     omega_r, J);
  const double half_split = coupling_oracle_single_excitation(s, p, 0, 1);

  CouplingQuery q;
  q.N = 1;
  q.M = 2;
  q.delta = delta;
  q.nu = nu_phys;
  q.J = J;
  q.dn = 0;
  q.dm = 1;
  const double K = coupling_exact_fourier(q).K;
  // residual corrections are O((nu/delta)^2) ~ 4e-6
  CHECK(std::abs(half_split / K - 1.0) < 5e-5);
}

TEST_CASE("oracle handles a decoupled pair and rejects mixed regimes") {
  LatticeSpec s;
  s.rows = 1;
  s.cols = 2;
  SiteParams off = SiteParams::uniform(s, units::twopi * 13.5, 0.0,
                                       units::twopi * 13.0,
                                       units::twopi * 0.05);
  CHECK(coupling_oracle_single_excitation(s, off, 0, 1) == 0.0);

  // near-resonant coupling: eigenstates hybridize, no clean qubit pair
  SiteParams res = SiteParams::uniform(s, units::twopi * 13.0,
                                       units::twopi * 0.5,
                                       units::twopi * 13.0,
                                       units::twopi * 0.05);
  CHECK_THROWS_AS(coupling_oracle_single_excitation(s, res, 0, 1),
                  NumericError);
}
