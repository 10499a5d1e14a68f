#include "sitnikov/dynamics.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "sitnikov/errors.hpp"
#include "sitnikov/format.hpp"
#include "sitnikov/ode.hpp"

namespace sitnikov {

namespace {

using Packed = std::array<double, 8>;

struct AugmentedRhs {
  double e;
  int N;

  void operator()(double t, const Packed& y, Packed& dy) const {
    const RadiusSample rs = radius_sample(t, e, N);
    const FieldTerms ft = field_terms(y[0], rs.r);
    dy[0] = y[1];
    dy[1] = -ft.force;
    dy[2] = y[3];
    dy[3] = -ft.a * y[2];
    dy[4] = y[5];
    dy[5] = -ft.a * y[4];
    dy[6] = y[7];
    dy[7] = -ft.a * y[6] - ft.df_dr * rs.dr_de;
  }
};

ode::IntegratorOptions integrator_options(const OrbitConfig& cfg) {
  ode::IntegratorOptions opt;
  opt.abs_tol = cfg.abs_tol;
  opt.rel_tol = cfg.rel_tol;
  return opt;
}

void check_signed(Eccentricity e, const OrbitConfig& cfg) {
  if (e.negative() && cfg.N % 2 == 0) throw DomainError("negative eccentricity requires odd N");
}

}  // namespace

void OrbitConfig::validate() const {
  if (N < 1) throw DomainError("OrbitConfig: N must be >= 1");
  auto in_range = [](double tol) { return tol >= 1e-14 && tol <= 1e-8; };
  if (!in_range(abs_tol) || !in_range(rel_tol)) throw DomainError("OrbitConfig: tolerances must lie in [1e-14, 1e-8]");
  if (sample_count < 512) throw DomainError("OrbitConfig: sample_count must be >= 512");
}

AugmentedState AugmentedState::initial(double xi) {
  AugmentedState s;
  s.z = xi;
  return s;
}

std::array<double, 8> AugmentedState::packed() const {
  return {z, z_dot, phi1, phi1_dot, phi2, phi2_dot, beta, beta_dot};
}

AugmentedState AugmentedState::unpack(const std::array<double, 8>& y) {
  return {y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7]};
}

FieldTerms field_terms(double z, double r) {
  const double z2 = z * z;
  const double r2 = r * r;
  const double d = z2 + r2;
  const double d32 = d * std::sqrt(d);
  const double d52 = d32 * d;
  const double d72 = d52 * d;
  FieldTerms ft;
  ft.force = z / d32;
  ft.a = (r2 - 2.0 * z2) / d52;
  ft.da_dz = 3.0 * z * (2.0 * z2 - 3.0 * r2) / d72;
  ft.da_dr = 3.0 * r * (4.0 * z2 - r2) / d72;
  ft.df_dr = -3.0 * z * r / d52;
  return ft;
}

double sensitivity_source(double z, const RadiusSample& radius) {
  return -field_terms(z, radius.r).df_dr * radius.dr_de;
}

AugmentedState Trajectory::state(std::size_t k) const {
  return {z[k], z_dot[k], dz_dxi[k], dz_dot_dxi[k], phi2[k], phi2_dot[k], dz_de[k], dz_dot_de[k]};
}

double Trajectory::variational_coefficient(std::size_t k) const {
  return field_terms(z[k], radius_sample(times[k], e, N).r).a;
}

std::vector<double> chebyshev_times(double t_end, std::size_t n) {
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    t[k] = 0.5 * t_end * (1.0 - std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n)));
  }
  t[0] = 0.0;
  t[n] = t_end;
  return t;
}

std::size_t sample_intervals(double t_end, const OrbitConfig& cfg) {
  const double halves = std::max(1.0, std::ceil(std::abs(t_end) / std::numbers::pi - 1e-9));
  return static_cast<std::size_t>(halves) * static_cast<std::size_t>(cfg.sample_count);
}

Trajectory flow(double xi, Eccentricity e, double t_end, const OrbitConfig& cfg) {
  cfg.validate();
  check_signed(e, cfg);
  Trajectory traj;
  traj.xi = xi;
  traj.e = e.value();
  traj.N = cfg.N;
  traj.times = chebyshev_times(t_end, sample_intervals(t_end, cfg));
  const std::size_t n = traj.times.size();
  for (auto* v : {&traj.z, &traj.z_dot, &traj.dz_dxi, &traj.dz_dot_dxi, &traj.phi2, &traj.phi2_dot, &traj.dz_de,
                  &traj.dz_dot_de}) {
    v->resize(n);
  }
  auto store = [&](std::size_t k, const Packed& y) {
    traj.z[k] = y[0];
    traj.z_dot[k] = y[1];
    traj.dz_dxi[k] = y[2];
    traj.dz_dot_dxi[k] = y[3];
    traj.phi2[k] = y[4];
    traj.phi2_dot[k] = y[5];
    traj.dz_de[k] = y[6];
    traj.dz_dot_de[k] = y[7];
  };

  auto stepper = ode::make_dop853<8>(AugmentedRhs{e.value(), cfg.N}, integrator_options(cfg));
  double t = 0.0;
  Packed y = AugmentedState::initial(xi).packed();
  store(0, y);
  for (std::size_t k = 1; k < n; ++k) {
    stepper.advance(t, y, traj.times[k]);
    store(k, y);
  }
  return traj;
}

AugmentedState propagate_from(double t0, const AugmentedState& s, double t1, Eccentricity e,
                              const OrbitConfig& cfg) {
  check_signed(e, cfg);
  auto stepper = ode::make_dop853<8>(AugmentedRhs{e.value(), cfg.N}, integrator_options(cfg));
  double t = t0;
  Packed y = s.packed();
  stepper.advance(t, y, t1);
  return AugmentedState::unpack(y);
}

AugmentedState propagate(double xi, Eccentricity e, double t_end, const OrbitConfig& cfg) {
  cfg.validate();
  return propagate_from(0.0, AugmentedState::initial(xi), t_end, e, cfg);
}

double refined_sup(const Trajectory& traj, double AugmentedState::*component, const OrbitConfig& cfg) {
  const std::size_t n = traj.size();
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = std::abs(traj.state(k).*component);
  const double grid_max = *std::max_element(v.begin(), v.end());
  // Sampling can hide a peak by at most O(h^2 |v''|); every local maximum
  // within that band is refined.
  const double band = 1e-3 * (1.0 + grid_max);
  const Eccentricity e(traj.e);
  double best = grid_max;
  for (std::size_t k = 0; k < n; ++k) {
    const bool left_ok = (k == 0) || v[k] >= v[k - 1];
    const bool right_ok = (k + 1 == n) || v[k] >= v[k + 1];
    if (!left_ok || !right_ok || v[k] < grid_max - band) continue;
    const std::size_t lo = (k == 0) ? 0 : k - 1;
    const std::size_t hi = std::min(n - 1, k + 1);
    const double t_lo = traj.times[lo];
    const AugmentedState s_lo = traj.state(lo);
    auto negabs = [&](double t) {
      if (t <= t_lo) return -std::abs(s_lo.*component);
      return -std::abs(propagate_from(t_lo, s_lo, t, e, cfg).*component);
    };
    const auto [t_star, f_star] =
        boost::math::tools::brent_find_minima(negabs, t_lo, traj.times[hi], std::numeric_limits<double>::digits / 2);
    (void)t_star;
    best = std::max(best, -f_star);
  }
  return best;
}

CanonicalPair canonical_pair(const Trajectory& traj, const OrbitConfig& cfg) {
  CanonicalPair pair;
  pair.times = traj.times;
  pair.phi1 = traj.dz_dxi;
  pair.phi1_dot = traj.dz_dot_dxi;
  pair.phi2 = traj.phi2;
  pair.phi2_dot = traj.phi2_dot;
  pair.sup_norm = std::max({refined_sup(traj, &AugmentedState::phi1, cfg),
                            refined_sup(traj, &AugmentedState::phi1_dot, cfg),
                            refined_sup(traj, &AugmentedState::phi2, cfg),
                            refined_sup(traj, &AugmentedState::phi2_dot, cfg)});
  return pair;
}

CanonicalPair canonical_solutions(double xi, Eccentricity e, double t_end, const OrbitConfig& cfg) {
  return canonical_pair(flow(xi, e, t_end, cfg), cfg);
}

ShootingValue shooting_value(double xi, Eccentricity e, int N, const OrbitConfig& cfg) {
  OrbitConfig c = cfg;
  c.N = N;
  const AugmentedState s = propagate(xi, e, N * std::numbers::pi, c);
  return {s.z_dot, s.phi1_dot, s.beta_dot};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,z,z_dot,dz_dxi,dz_dot_dxi,dz_de,dz_dot_de\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << sci(traj.times[k]) << ',' << sci(traj.z[k]) << ',' << sci(traj.z_dot[k]) << ',' << sci(traj.dz_dxi[k])
        << ',' << sci(traj.dz_dot_dxi[k]) << ',' << sci(traj.dz_de[k]) << ',' << sci(traj.dz_dot_de[k]) << '\n';
  }
}

}  // namespace sitnikov
