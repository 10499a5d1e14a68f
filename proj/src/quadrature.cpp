#include "sitnikov/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "sitnikov/errors.hpp"

namespace sitnikov::quad {

Rule gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

std::vector<double> clenshaw_curtis_weights(double length, std::size_t n) {
  if (n < 1) throw DomainError("Clenshaw-Curtis rule needs n >= 1");
  std::vector<double> w(n + 1, 0.0);
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / nn;
    double s = 0.0;
    for (std::size_t j = 1; j <= n / 2; ++j) {
      const double b = (2 * j == n) ? 1.0 : 2.0;
      s += b / (4.0 * j * j - 1.0) * std::cos(2.0 * j * theta);
    }
    const double c = (k == 0 || k == n) ? 1.0 : 2.0;
    w[k] = c / nn * (1.0 - s) * 0.5 * length;
  }
  return w;
}

}  // namespace sitnikov::quad
