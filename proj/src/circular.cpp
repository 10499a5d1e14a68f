#include "sitnikov/circular.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <json.hpp>
#include <numbers>
#include <ostream>

#include "sitnikov/errors.hpp"
#include "sitnikov/format.hpp"
#include "sitnikov/parallel.hpp"
#include "sitnikov/quadrature.hpp"

namespace sitnikov {

namespace {

constexpr std::size_t kPeriodNodes = 128;

const quad::Rule& period_rule() {
  static const quad::Rule rule = [] {
    // Map [-1, 1] onto the quarter period theta in [0, pi/2].
    quad::Rule r = quad::gauss_legendre(kPeriodNodes);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      r.nodes[i] = 0.25 * std::numbers::pi * (r.nodes[i] + 1.0);
      r.weights[i] *= 0.25 * std::numbers::pi;
    }
    return r;
  }();
  return rule;
}

}  // namespace

int branch_count(int N) {
  if (N < 1) throw DomainError("branch_count: N must be >= 1");
  const std::int64_t target = 8 * static_cast<std::int64_t>(N) * N;  // (2 sqrt 2 N)^2
  auto k = static_cast<std::int64_t>(std::sqrt(static_cast<double>(target)));
  while (k * k > target) --k;
  while ((k + 1) * (k + 1) <= target) ++k;
  return static_cast<int>(k);
}

double period_function(double xi, double radius) {
  if (!(xi > 0.0)) throw DomainError("period_function: xi must be positive");
  if (!(radius > 0.0)) throw DomainError("period_function: radius must be positive");
  // With z = xi sin(theta) and A = sqrt(z^2 + rho^2), B = sqrt(xi^2 + rho^2),
  // dt = sqrt((A + B) A B / 2) dtheta.
  const double rho2 = radius * radius;
  const double B = std::sqrt(xi * xi + rho2);
  const quad::Rule& rule = period_rule();
  double quarter = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double z = xi * std::sin(rule.nodes[i]);
    const double A = std::sqrt(z * z + rho2);
    quarter += rule.weights[i] * std::sqrt(0.5 * (A + B) * A * B);
  }
  return 4.0 * quarter;
}

double amplitude_for_period(double period, double radius) {
  const double small_amplitude = 2.0 * std::numbers::pi * std::pow(radius, 1.5);
  if (!(period > small_amplitude)) throw DomainError("amplitude_for_period: period below the small-amplitude limit");
  auto g = [&](double xi) { return period_function(xi, radius) - period; };
  double lo = 1e-9 * radius;
  double hi = 1.0;
  double g_lo = g(lo);
  double g_hi = g(hi);
  if (g_lo >= 0.0) throw DomainError("amplitude_for_period: period too close to the small-amplitude limit");
  while (g_hi <= 0.0) {
    lo = hi;
    g_lo = g_hi;
    hi *= 2.0;
    g_hi = g(hi);
    if (hi > 1e8) throw DomainError("amplitude_for_period: no bracket");
  }
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi,
                                                        boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (a + b);
}

double amplitude_bound(int N, double eccentricity_cap) {
  return amplitude_for_period(4.0 * N * std::numbers::pi, 0.5 * (1.0 - eccentricity_cap));
}

double canonical_envelope(double xi, const OrbitConfig& cfg) {
  return canonical_solutions(xi, Eccentricity(0.0), cfg.N * std::numbers::pi, cfg).sup_norm;
}

EnvelopeProfile canonical_envelope_profile(int N, double xi_star, int grid, const OrbitConfig& cfg) {
  if (grid < 200) throw DomainError("canonical_envelope_profile: grid must be >= 200");
  OrbitConfig c = cfg;
  c.N = N;
  EnvelopeProfile out;
  out.profile.resize(static_cast<std::size_t>(grid));
  parallel_for(out.profile.size(), [&](std::size_t i) {
    const double xi = xi_star * static_cast<double>(i) / static_cast<double>(grid - 1);
    out.profile[i] = {xi, canonical_envelope(xi, c)};
  });
  const auto it = std::max_element(out.profile.begin(), out.profile.end(),
                                   [](const EnvelopePoint& a, const EnvelopePoint& b) { return a.R0 < b.R0; });
  const std::size_t k = static_cast<std::size_t>(it - out.profile.begin());
  out.r0 = it->R0;
  out.xi_at_max = it->xi;
  const double lo = out.profile[k == 0 ? 0 : k - 1].xi;
  const double hi = out.profile[std::min(out.profile.size() - 1, k + 1)].xi;
  const auto [xi_best, neg] = boost::math::tools::brent_find_minima(
      [&](double xi) { return -canonical_envelope(xi, c); }, lo, hi, std::numeric_limits<double>::digits / 2);
  if (-neg > out.r0) {
    out.r0 = -neg;
    out.xi_at_max = xi_best;
  }
  return out;
}

int count_zeros(const Trajectory& traj) {
  int count = 0;
  double prev = traj.z.front();
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double cur = traj.z[k];
    if (cur == 0.0) continue;
    if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) ++count;
    prev = cur;
  }
  return count;
}

CircularCatalog find_branch_roots(int N, const CatalogOptions& opt) {
  if (N < 1) throw DomainError("find_branch_roots: N must be >= 1");
  CircularCatalog cat;
  cat.N = N;
  cat.cfg = opt.cfg;
  cat.cfg.N = N;
  cat.cfg.validate();
  cat.nu = branch_count(N);
  const double half_period = N * std::numbers::pi;

  cat.xi_p.resize(static_cast<std::size_t>(cat.nu));
  for (int p = 1; p <= cat.nu; ++p) {
    double xi = 0.0;
    try {
      xi = amplitude_for_period(2.0 * half_period / p);
    } catch (const DomainError& err) {
      throw CatalogError(std::string("period root not bracketed: ") + err.what(), p);
    }
    const ShootingValue sv = shooting_value(xi, Eccentricity(0.0), N, cat.cfg);
    if (std::abs(sv.F) > 1e-10) throw CatalogError("F_N(xi_p, 0) does not vanish", p);
    const int zeros = count_zeros(flow(xi, Eccentricity(0.0), half_period, cat.cfg));
    if (zeros != p) throw CatalogError("circular solution has the wrong number of zeros", p);
    cat.xi_p[static_cast<std::size_t>(p - 1)] = xi;
  }

  cat.xi_star = amplitude_bound(N, opt.eccentricity_cap);
  double gap = std::numeric_limits<double>::infinity();
  for (int p = 0; p <= cat.nu; ++p) {
    const double upper = (p == 0) ? cat.xi_star : cat.xi(p);
    const double lower = (p == cat.nu) ? 0.0 : cat.xi(p + 1);
    gap = std::min(gap, upper - lower);
  }
  cat.Delta_star = gap;
  if (!(gap > 0.0)) throw CatalogError("amplitude bound does not dominate xi_1", 1);

  if (opt.with_envelope) {
    const EnvelopeProfile env = canonical_envelope_profile(N, cat.xi_star, opt.envelope_grid, cat.cfg);
    cat.r0 = env.r0;
    cat.xi_r0 = env.xi_at_max;
    cat.R0_profile = env.profile;
  }
  return cat;
}

void write_catalog_json(std::ostream& out, const CircularCatalog& cat) {
  nlohmann::ordered_json j;
  j["N"] = cat.N;
  j["nu"] = cat.nu;
  j["xi_p"] = cat.xi_p;
  j["xi_star"] = cat.xi_star;
  j["Delta_star"] = cat.Delta_star;
  j["r0"] = cat.r0;
  out << j.dump(2) << '\n';
}

void write_envelope_csv(std::ostream& out, const CircularCatalog& cat) {
  out << "xi,R0\n";
  for (const auto& pt : cat.R0_profile) out << sci(pt.xi) << ',' << sci(pt.R0) << '\n';
}

}  // namespace sitnikov
