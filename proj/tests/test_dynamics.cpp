#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sitnikov/circular.hpp"
#include "sitnikov/dynamics.hpp"

using namespace sitnikov;

namespace {

OrbitConfig config(int N) {
  OrbitConfig c;
  c.N = N;
  return c;
}

double xi_1() {
  CatalogOptions opt;
  opt.with_envelope = false;
  return find_branch_roots(1, opt).xi(1);
}

}  // namespace

TEST_CASE("Wronskian of the canonical pair stays at one") {
  for (double e : {0.0, 0.1, 0.3}) {
    const CanonicalPair c = canonical_solutions(1.2, Eccentricity(e), 2.0 * std::numbers::pi, config(1));
    double worst = 0.0;
    for (std::size_t k = 0; k < c.times.size(); ++k)
      worst = std::max(worst, std::abs(c.phi1[k] * c.phi2_dot[k] - c.phi2[k] * c.phi1_dot[k] - 1.0));
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("sensitivities match central differences") {
  const OrbitConfig cfg = config(1);
  const double xi = 1.5, e = 0.2, h = 1e-5;
  const ShootingValue s = shooting_value(xi, Eccentricity(e), 1, cfg);
  const double dxi = (shooting_value(xi + h, Eccentricity(e), 1, cfg).F - shooting_value(xi - h, Eccentricity(e), 1, cfg).F) / (2 * h);
  const double de = (shooting_value(xi, Eccentricity(e + h), 1, cfg).F - shooting_value(xi, Eccentricity(e - h), 1, cfg).F) / (2 * h);
  CHECK(s.dF_dxi == doctest::Approx(dxi).epsilon(1e-6));
  CHECK(s.dF_de == doctest::Approx(de).epsilon(1e-6));
}

TEST_CASE("circular orbit is even about the half period of its own oscillation") {
  // At e = 0 the force is autonomous: z(t) is even in t and returns after one
  // period of the period function.
  const double xi = 1.0;
  const double T = period_function(xi);
  const AugmentedState s = propagate(xi, Eccentricity(0.0), T, config(1));
  CHECK(s.z == doctest::Approx(xi).epsilon(1e-10));
  CHECK(std::abs(s.z_dot) < 1e-10);
}

TEST_CASE("variational derivative at the first circular branch") {
  const double xi = xi_1();
  const OrbitConfig cfg = config(1);
  const AugmentedState half = propagate(xi, Eccentricity(0.0), std::numbers::pi, cfg);
  const AugmentedState full = propagate(xi, Eccentricity(0.0), 2.0 * std::numbers::pi, cfg);
  CHECK(std::abs(half.z_dot) < 1e-9);
  CHECK(half.phi1_dot == doctest::Approx(-2.2022781).epsilon(1e-7));
  CHECK(std::abs(full.phi1_dot) == doctest::Approx(4.4045562).epsilon(1e-7));
  CHECK(std::abs(std::abs(half.phi1) - 1.0) < 1e-9);
}

TEST_CASE("field terms are consistent derivatives") {
  const double z = 0.7, r = 0.4, h = 1e-6;
  const FieldTerms f = field_terms(z, r);
  CHECK(f.a == doctest::Approx((field_terms(z + h, r).force - field_terms(z - h, r).force) / (2 * h)).epsilon(1e-8));
  CHECK(f.da_dz == doctest::Approx((field_terms(z + h, r).a - field_terms(z - h, r).a) / (2 * h)).epsilon(1e-8));
  CHECK(f.da_dr == doctest::Approx((field_terms(z, r + h).a - field_terms(z, r - h).a) / (2 * h)).epsilon(1e-8));
  CHECK(f.df_dr == doctest::Approx((field_terms(z, r + h).force - field_terms(z, r - h).force) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("configuration validation") {
  OrbitConfig c;
  c.abs_tol = 1e-3;
  CHECK_THROWS(c.validate());
  c = OrbitConfig{};
  c.sample_count = 10;
  CHECK_THROWS(c.validate());
}
