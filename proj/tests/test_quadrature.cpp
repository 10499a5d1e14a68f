#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sitnikov/dynamics.hpp"
#include "sitnikov/quadrature.hpp"

using namespace sitnikov;

TEST_CASE("Gauss-Legendre is exact for degree 2n-1") {
  const quad::Rule r = quad::gauss_legendre(8);
  double s = 0.0, w = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    s += r.weights[i] * std::pow(r.nodes[i], 14);
    w += r.weights[i];
  }
  CHECK(w == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
}

TEST_CASE("Clenshaw-Curtis integrates smooth periodic data spectrally") {
  const double L = 2.0 * std::numbers::pi;
  const std::size_t n = 64;
  const auto w = quad::clenshaw_curtis_weights(L, n);
  const auto t = chebyshev_times(L, n);
  REQUIRE(w.size() == t.size());
  double s = 0.0;
  for (std::size_t k = 0; k <= n; ++k) s += w[k] * std::exp(std::cos(t[k]));
  CHECK(s == doctest::Approx(2.0 * std::numbers::pi * std::cyl_bessel_i(0.0, 1.0)).epsilon(1e-13));
}
