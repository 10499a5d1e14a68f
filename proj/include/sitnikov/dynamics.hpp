#pragma once

// Sitnikov equation z'' = -z / (z^2 + r(t,e)^2)^{3/2} integrated together with
// its first variational equation (both canonical solutions) and the
// eccentricity-sensitivity equation.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sitnikov/kepler.hpp"

namespace sitnikov {

struct OrbitConfig {
  int N = 1;                // half-periods; shooting time is N pi
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int sample_count = 512;   // dense samples per half-period of length pi

  /// Throws DomainError on N < 1, tolerances outside [1e-14, 1e-8] or sample_count < 512.
  void validate() const;
};

/// Augmented state: position, velocity, both canonical solutions of the
/// variational equation and the e-sensitivity beta = dz/de.
struct AugmentedState {
  double z = 0.0;
  double z_dot = 0.0;
  double phi1 = 1.0;      // dz/dxi
  double phi1_dot = 0.0;
  double phi2 = 0.0;
  double phi2_dot = 1.0;
  double beta = 0.0;      // dz/de
  double beta_dot = 0.0;

  static AugmentedState initial(double xi);
  std::array<double, 8> packed() const;
  static AugmentedState unpack(const std::array<double, 8>& y);
};

/// Pointwise coefficients of the equation and its linearizations at (z, r).
struct FieldTerms {
  double force = 0.0;   // f = z / (z^2 + r^2)^{3/2}
  double a = 0.0;       // df/dz = (r^2 - 2 z^2) / (z^2 + r^2)^{5/2}
  double da_dz = 0.0;   // 3 z (2 z^2 - 3 r^2) / (z^2 + r^2)^{7/2}
  double da_dr = 0.0;   // 3 r (4 z^2 - r^2) / (z^2 + r^2)^{7/2}
  double df_dr = 0.0;   // -3 z r / (z^2 + r^2)^{5/2}
};

FieldTerms field_terms(double z, double r);

/// Source term of the sensitivity equation beta'' + a beta = p, p = -df/de.
double sensitivity_source(double z, const RadiusSample& radius);

struct Trajectory {
  double xi = 0.0;
  double e = 0.0;
  int N = 1;
  std::vector<double> times;
  std::vector<double> z, z_dot;
  std::vector<double> dz_dxi, dz_dot_dxi;   // phi1, phi1'
  std::vector<double> phi2, phi2_dot;
  std::vector<double> dz_de, dz_dot_de;     // beta, beta'

  std::size_t size() const { return times.size(); }
  AugmentedState state(std::size_t k) const;
  /// a_{xi,e}(t_k) along the trajectory.
  double variational_coefficient(std::size_t k) const;
};

struct CanonicalPair {
  std::vector<double> times;
  std::vector<double> phi1, phi1_dot, phi2, phi2_dot;
  double sup_norm = 0.0;
};

struct ShootingValue {
  double F = 0.0;       // z'(N pi)
  double dF_dxi = 0.0;  // phi1'(N pi)
  double dF_de = 0.0;   // beta'(N pi)
};

/// Chebyshev-Lobatto points t_k = T/2 (1 - cos(pi k / n)), k = 0..n.
std::vector<double> chebyshev_times(double t_end, std::size_t n);

/// Number of sample intervals used by flow for a given end time.
std::size_t sample_intervals(double t_end, const OrbitConfig& cfg);

/// Integrates the augmented system from (xi, 0) over [0, t_end], sampled at
/// Chebyshev-Lobatto points. Negative e requires odd cfg.N.
Trajectory flow(double xi, Eccentricity e, double t_end, const OrbitConfig& cfg);

/// Endpoint-only integration of the augmented system.
AugmentedState propagate(double xi, Eccentricity e, double t_end, const OrbitConfig& cfg);

/// Continues an augmented state from t0 to t1.
AugmentedState propagate_from(double t0, const AugmentedState& s, double t1, Eccentricity e,
                              const OrbitConfig& cfg);

/// Maximum of |component| over the trajectory, refined between samples by
/// re-integrating from the neighbouring sample and maximizing locally.
/// `component` selects a member of AugmentedState.
double refined_sup(const Trajectory& traj, double AugmentedState::*component, const OrbitConfig& cfg);

CanonicalPair canonical_solutions(double xi, Eccentricity e, double t_end, const OrbitConfig& cfg);
CanonicalPair canonical_pair(const Trajectory& traj, const OrbitConfig& cfg);

/// F_N(xi, e) = z'(N pi; xi, e) with its exact sensitivities.
ShootingValue shooting_value(double xi, Eccentricity e, int N, const OrbitConfig& cfg);

/// CSV with columns t,z,z_dot,dz_dxi,dz_dot_dxi,dz_de,dz_dot_de.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace sitnikov
