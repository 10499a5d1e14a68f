#pragma once

// Kepler's equation for the primaries and the distance r(t, e) of each primary
// to the barycenter, including the analytic continuation to negative
// eccentricities used for odd N.

namespace sitnikov {

/// Laplace limit: radius of convergence in e of the Lagrange series of u(t, e).
inline constexpr double kLaplaceLimit = 0.6627434193491816;

/// Orbital eccentricity of the primaries. Negative values are the analytic
/// continuation and are only meaningful for odd N.
class Eccentricity {
 public:
  /// Throws DomainError unless -kLaplaceLimit < value < 1.
  explicit Eccentricity(double value);

  double value() const { return value_; }
  bool negative() const { return value_ < 0.0; }

 private:
  double value_;
};

struct KeplerSolution {
  double t = 0.0;
  double e = 0.0;
  double u = 0.0;      // eccentric anomaly
  double r = 0.0;      // (1 - e cos u) / 2
  double dr_dt = 0.0;
  double dr_de = 0.0;  // implicit differentiation of u - e sin u = t
};

/// Newton on u - e sin u = t from u0 = t + e sin t, bisection fallback on
/// [t - |e|, t + |e|]. Residual is driven below 1e-14 (relative to |t| + 1).
/// Throws SolverFailure if neither route converges.
KeplerSolution solve_kepler(double t, Eccentricity e);

/// r and its derivatives in t and e, with the odd-N reflection
/// r(t, -e) := r(t + N pi, e) for negative eccentricities.
struct RadiusSample {
  double r = 0.0;
  double dr_dt = 0.0;
  double dr_de = 0.0;
};

/// Distance of the primaries for a signed eccentricity. For e_signed < 0 the
/// value is r(t + N pi, |e_signed|); N must then be odd. Throws DomainError
/// when |e_signed| reaches the Laplace limit or N is even with e_signed < 0.
double radius_extended(double t, double e_signed, int N);

/// Same reflection as radius_extended, also returning the t- and e-derivatives
/// of the extended function.
RadiusSample radius_sample(double t, double e_signed, int N);

/// Truncated Lagrange inversion u = t + sum_{k<=order} c_k(t) e^k / k!, with
/// c_k(t) = d^{k-1}/dt^{k-1} sin^k t evaluated from exact trigonometric tables.
/// Requires 1 <= order <= 12 and |e| < kLaplaceLimit.
double lagrange_series_u(double t, double e, int order);

/// c_k(t) itself, for 1 <= k <= 12.
double lagrange_coefficient(int k, double t);

}  // namespace sitnikov
