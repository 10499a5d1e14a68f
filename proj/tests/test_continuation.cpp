#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sitnikov/bounds.hpp"
#include "sitnikov/continuation.hpp"

using namespace sitnikov;

namespace {

const CircularCatalog& catalog_1() {
  static const CircularCatalog c = [] {
    CatalogOptions opt;
    opt.envelope_grid = 200;
    return find_branch_roots(1, opt);
  }();
  return c;
}

}  // namespace

TEST_CASE("trace classification") {
  CHECK(classify_trace(1.0) == StabilityClass::elliptic);
  CHECK(classify_trace(-2.5) == StabilityClass::hyperbolic);
  CHECK(classify_trace(2.0 + 1e-12) == StabilityClass::parabolic);
}

TEST_CASE("continuation slope matches the implicit derivative of the corrected branch") {
  const CircularCatalog& c = catalog_1();
  const double e = 0.05, h = 1e-4;
  const double xi0 = branch_xi_at(trace_branch(c, 1, 0.06, {.step = 0.01, .diagnostics = false}), e, c.cfg);
  const double up = correct(xi0, e + h, 1, c.cfg).xi;
  const double dn = correct(xi0, e - h, 1, c.cfg).xi;
  CHECK(continuation_rhs(e, xi0, 1, c.cfg) == doctest::Approx((up - dn) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("corrector lands on a zero of the shooting function") {
  const CircularCatalog& c = catalog_1();
  const BranchPoint pt = correct(c.xi(2), 0.02, 1, c.cfg);
  CHECK(std::abs(pt.F_residual) <= 1e-10);
  CHECK(std::abs(pt.xi - c.xi(2)) < 0.05);
}

TEST_CASE("monodromy is unimodular and the circular branches start parabolic") {
  const CircularCatalog& c = catalog_1();
  for (int p : {1, 2}) {
    const Monodromy m = monodromy(c.xi(p), Eccentricity(0.0), c.cfg);
    CHECK(std::abs(m.det() - 1.0) < 1e-9);
    CHECK(m.trace() == doctest::Approx(2.0).epsilon(1e-8));
  }
}

TEST_CASE("branches are traced without fold and stay in the catalog gaps") {
  const CircularCatalog& c = catalog_1();
  const Branch b = trace_branch(c, 1, 0.1, {.step = 0.01});
  CHECK(b.termination_reason == Termination::reached_e_max);
  CHECK(b.points.front().xi == c.xi(1));
  CHECK(b.points.back().e == doctest::Approx(0.1));
  for (const auto& pt : b.points) {
    CHECK(std::abs(pt.F_residual) <= 1e-10);
    CHECK(std::abs(pt.dF_dxi) > kFoldThreshold);
  }
}

TEST_CASE("reflection between positive and negative eccentricities") {
  const CircularCatalog& c = catalog_1();
  for (int p : {1, 2}) {
    const Branch pos = trace_branch(c, p, 0.1, {.step = 0.02, .diagnostics = false});
    const Branch neg = trace_branch_negative(c, p, -0.1, {.step = 0.02, .diagnostics = false});
    const Lemma3Check chk = lemma3_check(1, p, 0.1, pos.points.back().xi, neg.points.back().xi, c.cfg, 32);
    CHECK(chk.relation_error < 1e-8);
    CHECK(chk.trajectory_error < 1e-8);
  }
}

TEST_CASE("amplitude bound on the certified interval") {
  const CircularCatalog& c = catalog_1();
  const BoundsLedger L = continuation_constants(c, 1);
  const double es = static_cast<double>(L.e_star);
  const Branch b = trace_branch(c, 1, es, {.step = es / 4});
  const Theorem1Audit a = verify_theorem1(b, L);
  CHECK(a.passed);
  CHECK(a.checked >= 5);
  CHECK(a.min_margin >= -1e-10);
}
