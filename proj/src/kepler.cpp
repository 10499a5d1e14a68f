#include "sitnikov/kepler.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "sitnikov/errors.hpp"

namespace sitnikov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kNewtonCap = 50;
constexpr double kResidualTol = 1e-14;
constexpr int kMaxLagrangeOrder = 12;

// Solves u - e sin u = tau for |tau| <= pi.
double solve_reduced(double tau, double e, double t_for_error) {
  if (e == 0.0) return tau;
  double u = tau + e * std::sin(tau);
  for (int it = 0; it < kNewtonCap; ++it) {
    const double f = u - e * std::sin(u) - tau;
    if (std::abs(f) <= kResidualTol) {
      // One more step costs nothing and lands on the rounding floor.
      return u - f / (1.0 - e * std::cos(u));
    }
    u -= f / (1.0 - e * std::cos(u));
    if (!std::isfinite(u)) break;
  }
  // u - tau = e sin u, so the root lies in [tau - |e|, tau + |e|]; the map is increasing.
  double lo = tau - std::abs(e);
  double hi = tau + std::abs(e);
  double mid = 0.5 * (lo + hi);
  double f = 0.0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    f = mid - e * std::sin(mid) - tau;
    if (f == 0.0 || hi - lo <= 4e-16 * (1.0 + std::abs(mid))) break;
    (f < 0.0 ? lo : hi) = mid;
  }
  if (std::abs(f) > 10.0 * kResidualTol) throw SolverFailure(t_for_error, e, std::abs(f));
  return mid;
}

struct TrigTerm {
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

using LagrangeTable = std::array<std::array<TrigTerm, kMaxLagrangeOrder + 1>, kMaxLagrangeOrder + 1>;

// table[k][j]: c_k(t) = sum_j cos_coef cos(j t) + sin_coef sin(j t).
// sin^k t = (2i)^{-k} sum_m C(k,m) (-1)^m exp(i (k-2m) t); each derivative
// multiplies the exp(i j t) mode by i j. All intermediate values are exact in
// double for k <= 12.
LagrangeTable build_lagrange_table() {
  LagrangeTable table{};
  using cplx = std::complex<double>;
  for (int k = 1; k <= kMaxLagrangeOrder; ++k) {
    const cplx prefactor = std::pow(cplx(0.0, 2.0), -k);
    double binom = 1.0;  // C(k, m)
    for (int m = 0; m <= k; ++m) {
      if (m > 0) binom = binom * (k - m + 1) / m;
      const int j = k - 2 * m;
      if (j <= 0) continue;  // j < 0 folds into the conjugate; j = 0 dies after one derivative
      const cplx gamma = prefactor * binom * ((m % 2 == 0) ? 1.0 : -1.0);
      const cplx g = gamma * std::pow(cplx(0.0, static_cast<double>(j)), k - 1);
      table[k][j].cos_coef += 2.0 * g.real();
      table[k][j].sin_coef += -2.0 * g.imag();
    }
  }
  return table;
}

const LagrangeTable& lagrange_table() {
  static const LagrangeTable table = build_lagrange_table();
  return table;
}

}  // namespace

Eccentricity::Eccentricity(double value) : value_(value) {
  if (!(value > -kLaplaceLimit && value < 1.0)) {
    throw DomainError("eccentricity " + std::to_string(value) + " outside (-0.6627434, 1)");
  }
}

KeplerSolution solve_kepler(double t, Eccentricity ecc) {
  if (!std::isfinite(t)) throw DomainError("solve_kepler: non-finite time");
  const double e = ecc.value();
  const double turns = std::round(t / kTwoPi);
  const double tau = t - turns * kTwoPi;
  const double u = solve_reduced(tau, e, t) + turns * kTwoPi;

  const double su = std::sin(u);
  const double cu = std::cos(u);
  const double denom = 1.0 - e * cu;
  KeplerSolution s;
  s.t = t;
  s.e = e;
  s.u = u;
  s.r = 0.5 * denom;
  s.dr_dt = 0.5 * e * su / denom;
  s.dr_de = 0.5 * (-cu + e * su * su / denom);
  return s;
}

RadiusSample radius_sample(double t, double e_signed, int N) {
  if (!(std::abs(e_signed) < kLaplaceLimit) && e_signed < 0.0) {
    throw DomainError("negative eccentricity beyond the Laplace limit");
  }
  if (e_signed >= 0.0) {
    const KeplerSolution s = solve_kepler(t, Eccentricity(e_signed));
    return {s.r, s.dr_dt, s.dr_de};
  }
  if (N % 2 == 0) throw DomainError("negative eccentricity requires odd N");
  const KeplerSolution s = solve_kepler(t + N * std::numbers::pi, Eccentricity(-e_signed));
  return {s.r, s.dr_dt, -s.dr_de};
}

double radius_extended(double t, double e_signed, int N) {
  if (!(std::abs(e_signed) < kLaplaceLimit)) {
    throw DomainError("radius_extended: |e| must stay below the Laplace limit");
  }
  return radius_sample(t, e_signed, N).r;
}

double lagrange_coefficient(int k, double t) {
  if (k < 1 || k > kMaxLagrangeOrder) throw DomainError("Lagrange coefficient index out of range");
  const auto& row = lagrange_table()[k];
  double sum = 0.0;
  for (int j = 1; j <= k; ++j) {
    if (row[j].cos_coef != 0.0) sum += row[j].cos_coef * std::cos(j * t);
    if (row[j].sin_coef != 0.0) sum += row[j].sin_coef * std::sin(j * t);
  }
  return sum;
}

double lagrange_series_u(double t, double e, int order) {
  if (order < 1 || order > kMaxLagrangeOrder) throw DomainError("Lagrange order must be in [1, 12]");
  if (!(std::abs(e) < kLaplaceLimit)) throw DomainError("Lagrange series diverges for |e| >= Laplace limit");
  double u = t;
  double term = 1.0;  // e^k / k!
  for (int k = 1; k <= order; ++k) {
    term *= e / k;
    u += lagrange_coefficient(k, t) * term;
  }
  return u;
}

}  // namespace sitnikov
