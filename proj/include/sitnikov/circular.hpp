#pragma once

// The integrable circular problem (e = 0): period function, the initial
// conditions of all even 2N pi-periodic solutions, the a-priori amplitude
// bound and the envelope r0 of the canonical solutions.

#include <iosfwd>
#include <utility>
#include <vector>

#include "sitnikov/dynamics.hpp"

namespace sitnikov {

/// Eccentricity cap used for the a-priori amplitude bound.
inline constexpr double kEccentricityCap = 0.99;

struct EnvelopePoint {
  double xi = 0.0;
  double R0 = 0.0;
};

struct CircularCatalog {
  int N = 1;
  int nu = 0;                   // number of nontrivial branches, floor(2 sqrt(2) N)
  std::vector<double> xi_p;     // xi_p[p-1], strictly decreasing in p
  double xi_star = 0.0;         // a-priori amplitude bound
  double Delta_star = 0.0;      // minimal gap between consecutive xi_p (with xi_0 = xi_star, xi_{nu+1} = 0)
  double r0 = 0.0;              // sup of R0 over [0, xi_star]
  double xi_r0 = 0.0;           // where the sup is attained
  std::vector<EnvelopePoint> R0_profile;
  OrbitConfig cfg;

  double xi(int p) const { return xi_p.at(static_cast<std::size_t>(p - 1)); }
};

struct CatalogOptions {
  OrbitConfig cfg;
  int envelope_grid = 400;
  bool with_envelope = true;
  double eccentricity_cap = kEccentricityCap;
};

/// floor(2 sqrt(2) N), computed in integer arithmetic.
int branch_count(int N);

/// Minimal period of the circular solution with z(0) = xi, z'(0) = 0 when the
/// primaries move on a circle of the given radius. Quarter-period quadrature
/// after the substitution z = xi sin(theta), which removes the turning-point
/// singularity; 128-node Gauss-Legendre.
double period_function(double xi, double radius = 0.5);

/// Solves period_function(xi, radius) = period for xi > 0 (period must exceed
/// the small-amplitude limit 2 pi radius^{3/2}).
double amplitude_for_period(double period, double radius = 0.5);

/// Amplitude bound: the amplitude whose period is 4 N pi in the auxiliary
/// circular problem of radius (1 - eccentricity_cap) / 2.
double amplitude_bound(int N, double eccentricity_cap = kEccentricityCap);

/// R0(xi): sup-norm of the canonical pair of the e = 0 variational equation on [0, N pi].
double canonical_envelope(double xi, const OrbitConfig& cfg);

struct EnvelopeProfile {
  double r0 = 0.0;
  double xi_at_max = 0.0;
  std::vector<EnvelopePoint> profile;
};

/// R0 on `grid` uniform points of [0, xi_star]; the sup is refined by a local
/// maximization around the grid maximizer. Requires grid >= 200.
EnvelopeProfile canonical_envelope_profile(int N, double xi_star, int grid, const OrbitConfig& cfg);

/// Builds the catalog: xi_p from period(xi_p) = 2 N pi / p, verified against
/// F_N(xi_p, 0) = 0 and the zero count of the circular solution; xi_star;
/// Delta_star; the envelope r0. Throws CatalogError naming p on failure.
CircularCatalog find_branch_roots(int N, const CatalogOptions& opt = {});

/// Sign changes of z on the sampled trajectory.
int count_zeros(const Trajectory& traj);

/// JSON {N, nu, xi_p[], xi_star, Delta_star, r0}.
void write_catalog_json(std::ostream& out, const CircularCatalog& cat);

/// CSV xi,R0 of the envelope profile.
void write_envelope_csv(std::ostream& out, const CircularCatalog& cat);

}  // namespace sitnikov
