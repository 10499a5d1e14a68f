#pragma once

#include <cstddef>
#include <vector>

namespace sitnikov::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton on the three-term recurrence).
Rule gauss_legendre(std::size_t n);

/// Clenshaw-Curtis weights on [0, length] for the n+1 Chebyshev-Lobatto points
/// t_k = length/2 (1 - cos(pi k / n)), matching sitnikov::chebyshev_times.
std::vector<double> clenshaw_curtis_weights(double length, std::size_t n);

}  // namespace sitnikov::quad
