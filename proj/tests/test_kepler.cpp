#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sitnikov/errors.hpp"
#include "sitnikov/kepler.hpp"

using namespace sitnikov;

TEST_CASE("kepler residual and radius bounds on a grid") {
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double e = 0.98 * i / 40.0;
    for (int k = 0; k <= 200; ++k) {
      const double t = -2.0 * std::numbers::pi + 6.0 * std::numbers::pi * k / 200.0;
      const KeplerSolution s = solve_kepler(t, Eccentricity(e));
      worst = std::max(worst, std::abs(s.u - e * std::sin(s.u) - t) / (std::abs(t) + 1.0));
      CHECK(s.r >= (1.0 - e) / 2.0 - 1e-15);
      CHECK(s.r <= (1.0 + e) / 2.0 + 1e-15);
    }
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("circular case is the identity") {
  const KeplerSolution s = solve_kepler(1.3, Eccentricity(0.0));
  CHECK(s.u == doctest::Approx(1.3).epsilon(1e-15));
  CHECK(s.r == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(s.dr_dt) < 1e-15);
  CHECK(s.dr_de == doctest::Approx(-0.5 * std::cos(1.3)).epsilon(1e-13));
}

TEST_CASE("Lagrange series agrees below the Laplace limit") {
  for (double t : {0.3, 1.1, 2.7, 4.0}) {
    const double e = 0.05;
    const double u = solve_kepler(t, Eccentricity(e)).u;
    CHECK(std::abs(lagrange_series_u(t, e, 12) - u) < 1e-14);
  }
  CHECK(lagrange_coefficient(1, 0.7) == doctest::Approx(std::sin(0.7)));
  CHECK(lagrange_coefficient(2, 0.7) == doctest::Approx(std::sin(1.4)));
}

TEST_CASE("derivatives match finite differences") {
  const double t = 0.9, e = 0.3, h = 1e-6;
  const KeplerSolution s = solve_kepler(t, Eccentricity(e));
  const double rt = (solve_kepler(t + h, Eccentricity(e)).r - solve_kepler(t - h, Eccentricity(e)).r) / (2 * h);
  const double re = (solve_kepler(t, Eccentricity(e + h)).r - solve_kepler(t, Eccentricity(e - h)).r) / (2 * h);
  CHECK(s.dr_dt == doctest::Approx(rt).epsilon(1e-8));
  CHECK(s.dr_de == doctest::Approx(re).epsilon(1e-8));
}

TEST_CASE("negative eccentricity is the half-period shift") {
  const double t = 0.4;
  CHECK(radius_extended(t, -0.2, 1) == doctest::Approx(solve_kepler(t + std::numbers::pi, Eccentricity(0.2)).r));
  CHECK(radius_extended(t, -0.2, 3) == doctest::Approx(solve_kepler(t + 3 * std::numbers::pi, Eccentricity(0.2)).r));
  CHECK_THROWS_AS(radius_extended(t, -0.2, 2), DomainError);
  CHECK_THROWS_AS(Eccentricity(1.0), DomainError);
  CHECK_THROWS_AS(Eccentricity(-0.7), DomainError);
}

TEST_CASE("extended radius derivative in e is continuous through zero") {
  const double t = 1.7, h = 1e-6;
  const RadiusSample s = radius_sample(t, 0.0, 1);
  const double fd = (radius_extended(t, h, 1) - radius_extended(t, -h, 1)) / (2 * h);
  CHECK(s.dr_de == doctest::Approx(fd).epsilon(1e-6));
}
