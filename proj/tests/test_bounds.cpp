#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sitnikov/bounds.hpp"
#include "sitnikov/errors.hpp"

using namespace sitnikov;

namespace {

const CircularCatalog& catalog_1() {
  static const CircularCatalog c = [] {
    CatalogOptions opt;
    opt.envelope_grid = 400;
    return find_branch_roots(1, opt);
  }();
  return c;
}

}  // namespace

TEST_CASE("coefficient closed forms") {
  CHECK(sigma(0.0L) == 16.0L);
  CHECK(b1(0.0L, 1) == 0.0L);
  CHECK(b2(0.0L, 1) == 0.0L);
  // At e = 0 the polynomial reduces to -R.
  CHECK(q_tilde(0.0L, 3.0L, 1) == doctest::Approx(-3.0));
  CHECK(q_function(0.0L, 3.0L, 1, 2.0L) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(r_m(0.0L, 1), DomainError);
  CHECK_THROWS_AS(q_tilde(0.1L, -1.0L, 1), DomainError);
}

TEST_CASE("R_m is the critical point and R* the root") {
  for (long double e : {1e-10L, 1e-4L, 0.2L}) {
    const long double R = r_m(e, 1), h = R * 1e-6L;
    const long double dq = (q_tilde(e, R + h, 1) - q_tilde(e, R - h, 1)) / (2 * h);
    CHECK(std::abs(static_cast<double>(dq)) < 1e-6);
    CHECK(static_cast<double>(q_tilde_min(e, 1)) == doctest::Approx(static_cast<double>(q_tilde(e, R, 1))).epsilon(1e-12));
    CHECK(std::abs(static_cast<double>(q_tilde(e, r_star(e, 1), 1))) < 1e-9 * static_cast<double>(r_star(e, 1)));
    CHECK(r_m(e, 1) < r_star(e, 1));
  }
}

TEST_CASE("E* solves the defining equation and follows the asymptotics") {
  const long double r0 = 6.6236;
  const long double E = solve_E_star(r0, 1);
  CHECK(static_cast<double>(q_tilde_min(E, 1) + r0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(static_cast<double>(E / asymptotic_E_star(r0, 1)) == doctest::Approx(1.0).epsilon(5e-3));
  // Larger envelopes leave less room.
  CHECK(solve_E_star(r0 + 1.0L, 1) < E);
  CHECK(solve_E_star(r0, 3) < E);
}

TEST_CASE("first root of Q") {
  const long double r0 = 6.6236, E = solve_E_star(r0, 1);
  CHECK(first_root(0.0L, 1, r0) == r0);
  long double prev = r0;
  for (int i = 1; i <= 4; ++i) {
    const long double e = E * i / 5.0L;
    const long double R1 = first_root(e, 1, r0);
    CHECK(R1 > prev);
    CHECK(R1 <= r_m(e, 1));
    CHECK(std::abs(static_cast<double>(q_function(e, R1, 1, r0))) < 1e-9);
    prev = R1;
  }
  CHECK_THROWS_AS(first_root(2.0L * E, 1, r0), LedgerError);
}

TEST_CASE("ledger invariants for N = 1") {
  for (int p : {1, 2}) {
    const BoundsLedger L = continuation_constants(catalog_1(), p);
    CHECK(L.E_hat * 2.0L * L.Psi == doctest::Approx(static_cast<double>(L.phi1dot_circ)).epsilon(1e-14));
    CHECK(L.E_star2 == std::min(L.E_star, L.E_hat));
    CHECK(L.Gamma >= L.phi1dot_circ / 2.0L * (1.0L - 1e-12L));
    CHECK(L.M == doctest::Approx(static_cast<double>(L.Upsilon / L.Gamma)));
    CHECK(L.e_star <= L.E_star2);
    CHECK(L.e_star > 0.0L);
    CHECK(L.R_cal > L.r0);
    CHECK(L.amplitude_bound(0.0) == L.xi_p);
    CHECK(!L.entries.empty());
  }
  CHECK_THROWS_AS(continuation_constants(catalog_1(), 3), DomainError);
}

TEST_CASE("envelope certificate on [0, E*]") {
  const BoundsLedger L = continuation_constants(catalog_1(), 1);
  Lemma1Options opt;
  opt.e_samples = 3;
  opt.xi_samples = 9;
  const Lemma1Certificate cert = lemma1_certify(catalog_1(), static_cast<double>(L.E_star), opt);
  CHECK(cert.passed);
  CHECK(cert.rows.size() == 3);
  for (const auto& row : cert.rows) CHECK(row.R1 <= cert.R_cal * (1 + 1e-12));
}

TEST_CASE("coefficient audit is deterministic and passes") {
  OrbitConfig cfg;
  const AuditReport a = coefficient_audit(1, 2.0, 60, 7, 0.5, cfg);
  const AuditReport b = coefficient_audit(1, 2.0, 60, 7, 0.5, cfg);
  CHECK(a.passed());
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) CHECK(a.checks[i].worst_ratio == b.checks[i].worst_ratio);
}
