#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sitnikov/circular.hpp"

using namespace sitnikov;

TEST_CASE("branch count is floor(2 sqrt 2 N)") {
  CHECK(branch_count(1) == 2);
  CHECK(branch_count(2) == 5);
  CHECK(branch_count(3) == 8);
  CHECK(branch_count(10) == 28);
}

TEST_CASE("period function limits") {
  // Small amplitudes oscillate with the linear period 2 pi r^{3/2}.
  CHECK(period_function(1e-4) == doctest::Approx(2.0 * std::numbers::pi * std::pow(0.5, 1.5)).epsilon(1e-7));
  CHECK(period_function(2.0) > period_function(1.0));
  CHECK(amplitude_for_period(period_function(1.3)) == doctest::Approx(1.3).epsilon(1e-10));
}

TEST_CASE("catalog for N = 1") {
  CatalogOptions opt;
  opt.envelope_grid = 200;
  const CircularCatalog c = find_branch_roots(1, opt);
  REQUIRE(c.nu == 2);
  CHECK(c.xi_star == doctest::Approx(1.999901).epsilon(5e-5));
  CHECK(c.xi(1) > c.xi(2));
  CHECK(period_function(c.xi(1)) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-10));
  CHECK(period_function(c.xi(2)) == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  REQUIRE(!c.R0_profile.empty());
  CHECK(c.R0_profile.front().xi == 0.0);
  CHECK(std::abs(c.R0_profile.front().R0 - 2.0 * std::sqrt(2.0)) < 1e-6);
  CHECK(c.r0 >= c.R0_profile.front().R0);
  CHECK(c.Delta_star > 0.0);
  CHECK(c.Delta_star <= c.xi(2));
}

TEST_CASE("envelope oracle at the origin") {
  OrbitConfig cfg;
  CHECK(canonical_envelope(0.0, cfg) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
}
