#include "sitnikov/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "sitnikov/errors.hpp"
#include "sitnikov/format.hpp"

namespace sitnikov {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

void check_e(long double e, bool allow_zero, const char* who) {
  if (!(e >= 0.0L && e < 1.0L) || (!allow_zero && e == 0.0L))
    throw DomainError(std::string(who) + ": eccentricity outside the admissible range");
}

std::string str(long double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

long double sigma(long double e) {
  check_e(e, true, "sigma");
  const long double s = 1.0L - e;
  return 16.0L / (s * s * s);
}

long double d_bound(long double e, long double R, int N) {
  const long double s = sigma(e);
  return 6.0L * s * (1.0L + 3.0L * N * kPi * s * R * R) / ((1.0L - e) * (1.0L - e));
}

long double b1(long double e, int N) {
  check_e(e, true, "b1");
  const long double np = N * kPi;
  return 9216.0L * np * np * e / std::pow(1.0L - e, 8);
}

long double b2(long double e, int N) {
  check_e(e, true, "b2");
  return 192.0L * N * kPi * e / std::pow(1.0L - e, 5);
}

long double q_tilde(long double e, long double R, int N) {
  if (!(R >= 0.0L)) throw DomainError("q_tilde: R must be non-negative");
  const long double R2 = R * R;
  return ((b1(e, N) * R2 + b2(e, N)) * R2 - 1.0L) * R;
}

long double q_function(long double e, long double R, int N, long double r0) { return q_tilde(e, R, N) + r0; }

long double r_star(long double e, int N) {
  check_e(e, false, "r_star");
  // y = R^2 solves b1 y^2 + b2 y - 1 = 0.
  const long double B1 = b1(e, N), B2 = b2(e, N);
  return std::sqrt(2.0L / (std::sqrt(B2 * B2 + 4.0L * B1) + B2));
}

long double r_m(long double e, int N) {
  check_e(e, false, "r_m");
  const long double B1 = b1(e, N), B2 = b2(e, N);
  return std::sqrt(2.0L / (std::sqrt(9.0L * B2 * B2 + 20.0L * B1) + 3.0L * B2));
}

long double q_tilde_min(long double e, int N) {
  const long double R = r_m(e, N);
  return -2.0L * R * R * R * (2.0L * b1(e, N) * R * R + b2(e, N));
}

long double solve_E_star(long double r0, int N) {
  if (!(r0 > 0.0L)) throw DomainError("solve_E_star: r0 must be positive");
  if (N < 1) throw DomainError("solve_E_star: N must be >= 1");
  auto g = [&](long double loge) { return q_tilde_min(std::exp(loge), N) + r0; };
  long double lo = std::log(1e-40L), hi = std::log(0.5L);
  if (!(g(lo) < 0.0L) || !(g(hi) > 0.0L)) throw LedgerError("solve_E_star: root of Q~_m(e) = -r0 not bracketed");
  // g is increasing in e; the bracket width in log e is the relative error in e.
  while (hi - lo > 1e-13L) {
    const long double mid = 0.5L * (lo + hi);
    (g(mid) < 0.0L ? lo : hi) = mid;
  }
  const long double E = std::exp(0.5L * (lo + hi));
  for (long double f : {0.1L, 0.5L, 0.9L}) {
    if (!(q_tilde_min(f * E, N) < -r0)) throw LedgerError("solve_E_star: Q~_m(e) >= -r0 below the root");
  }
  return E;
}

long double asymptotic_E_star(long double r0, int N) {
  const long double np = N * kPi;
  return 256.0L / (3125.0L * std::pow(r0, 4) * 9216.0L * np * np);
}

long double first_root(long double e, int N, long double r0) {
  if (!(r0 > 0.0L)) throw DomainError("first_root: r0 must be positive");
  check_e(e, true, "first_root");
  if (e == 0.0L) return r0;
  long double lo = 0.0L, hi = r_m(e, N);
  if (!(q_function(e, hi, N, r0) <= 0.0L)) throw LedgerError("first_root: Q(e, .) has no positive root (e > E*)");
  for (int it = 0; it < 200 && hi - lo > 1e-15L * hi; ++it) {
    const long double mid = 0.5L * (lo + hi);
    (q_function(e, mid, N, r0) > 0.0L ? lo : hi) = mid;
  }
  return 0.5L * (lo + hi);
}

BoundsLedger continuation_constants(const CircularCatalog& catalog, int p) {
  if (p < 1 || p > catalog.nu) throw DomainError("continuation_constants: p outside 1..nu");
  if (!(catalog.r0 > 0.0)) throw LedgerError("continuation_constants: catalog carries no envelope r0");
  BoundsLedger L;
  L.N = catalog.N;
  L.p = p;
  L.xi_p = catalog.xi(p);
  L.r0 = catalog.r0;
  const int N = L.N;
  const long double np = N * kPi;

  L.E_star = solve_E_star(L.r0, N);
  L.b1_at_E_star = b1(L.E_star, N);
  L.b2_at_E_star = b2(L.E_star, N);
  L.R_cal = r_m(L.E_star, N);
  L.sigma_star = sigma(L.E_star);
  const long double R = L.R_cal, s = L.sigma_star, om = 1.0L - L.E_star;
  L.Upsilon = 12.0L * np / std::pow(om, 4) * (1.0L + 2.0L * np * s * R * R);
  L.Psi = 12.0L * np * s * (1.0L + 3.0L * np * s * R * R) * R * R * R / (om * om);

  const ShootingValue sv = shooting_value(L.xi_p, Eccentricity(0.0), N, catalog.cfg);
  L.phi1dot_circ = std::abs(static_cast<long double>(sv.dF_dxi));
  L.E_hat = L.phi1dot_circ / (2.0L * L.Psi);
  OrbitConfig c = catalog.cfg;
  c.N = N;
  const AugmentedState full = propagate(L.xi_p, Eccentricity(0.0), 2.0 * N * std::numbers::pi, c);
  L.phi1dot_period = std::abs(static_cast<long double>(full.phi1_dot));
  L.E_star2 = std::min(L.E_star, L.E_hat);
  L.Gamma = L.phi1dot_circ - L.Psi * L.E_star2;
  if (!(L.Gamma > 0.0L)) throw LedgerError("continuation_constants: |phi1'(N pi,0)| - Psi E** <= 0");
  L.M = L.Upsilon / L.Gamma;
  L.Delta_star = catalog.Delta_star;
  L.e_star = std::min(L.E_star2, L.Delta_star / L.M);
  L.gamma = L.M * R + 3.0L * np * s * R * R / (2.0L * (1.0L - L.e_star));

  L.entries = {
      {"r0", L.r0, "sup_{0<=xi<=xi*} R0(xi)", {"xi* = " + str(catalog.xi_star)}},
      {"b1", L.b1_at_E_star, "9216 (N pi)^2 e / (1-e)^8 at e = E*", {"N", "E*"}},
      {"b2", L.b2_at_E_star, "192 N pi e / (1-e)^5 at e = E*", {"N", "E*"}},
      {"E*", L.E_star, "root of -2 R_m^3 (2 b1 R_m^2 + b2) = -r0", {"r0", "N"}},
      {"R", L.R_cal, "R_m(E*), R_m^2 = (sqrt(9 b2^2 + 20 b1) - 3 b2)/(10 b1)", {"E*"}},
      {"sigma*", L.sigma_star, "16/(1-E*)^3", {"E*"}},
      {"Upsilon", L.Upsilon, "12 N pi/(1-E*)^4 (1 + 2 N pi sigma* R^2)", {"E*", "sigma*", "R"}},
      {"Psi", L.Psi, "12 N pi sigma* (1 + 3 N pi sigma* R^2) R^3/(1-E*)^2", {"E*", "sigma*", "R"}},
      {"|phi1'(N pi,0)|", L.phi1dot_circ, "canonical solution at xi_p, e = 0", {"xi_p = " + str(L.xi_p)}},
      {"|phi1'(2N pi,0)|", L.phi1dot_period, "canonical solution at xi_p, e = 0, full period (diagnostic)",
       {"xi_p = " + str(L.xi_p)}},
      {"E^", L.E_hat, "|phi1'(N pi,0)|/(2 Psi)", {"|phi1'(N pi,0)|", "Psi"}},
      {"E**", L.E_star2, "min(E*, E^)", {"E*", "E^"}},
      {"Gamma", L.Gamma, "|phi1'(N pi,0)| - Psi E**", {"|phi1'(N pi,0)|", "Psi", "E**"}},
      {"M", L.M, "Upsilon/Gamma", {"Upsilon", "Gamma"}},
      {"Delta*", L.Delta_star, "min gap between consecutive xi_p, xi_0 = xi*, xi_{nu+1} = 0", {"xi_p", "xi*"}},
      {"e*", L.e_star, "min(E**, Delta*/M)", {"E**", "Delta*", "M"}},
      {"gamma", L.gamma, "M R + 3 N pi sigma* R^2/(2(1-e*))", {"M", "R", "sigma*", "e*"}},
  };
  return L;
}

void write_ledger_json(std::ostream& out, const BoundsLedger& L) {
  nlohmann::ordered_json j;
  j["N"] = L.N;
  j["p"] = L.p;
  j["xi_p"] = L.xi_p;
  auto& arr = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : L.entries) {
    nlohmann::ordered_json row;
    row["symbol"] = e.symbol;
    row["value"] = static_cast<double>(e.value);
    row["formula"] = e.formula;
    row["inputs"] = e.inputs;
    arr.push_back(row);
  }
  out << j.dump(2) << '\n';
}

Lemma1Certificate lemma1_certify(const CircularCatalog& catalog, double e_max, const Lemma1Options& opt) {
  if (!(catalog.r0 > 0.0)) throw LedgerError("lemma1_certify: catalog carries no envelope r0");
  if (opt.e_samples < 2 || opt.xi_samples < 2) throw DomainError("lemma1_certify: need at least two samples per axis");
  const int N = catalog.N;
  const long double E_star = solve_E_star(catalog.r0, N);
  if (!(e_max >= 0.0 && e_max <= E_star)) throw DomainError("lemma1_certify: e_max must lie in [0, E*]");

  Lemma1Certificate cert;
  cert.N = N;
  cert.r0 = catalog.r0;
  cert.R_cal = static_cast<double>(r_m(E_star, N));

  std::vector<double> xis;
  for (int i = 0; i < opt.xi_samples; ++i) xis.push_back(catalog.xi_star * i / (opt.xi_samples - 1));
  xis.insert(xis.end(), catalog.xi_p.begin(), catalog.xi_p.end());
  xis.push_back(catalog.xi_r0);

  const double T = N * std::numbers::pi;
  double running = 0.0, running_xi = 0.0;
  for (int j = 0; j < opt.e_samples; ++j) {
    const double e = e_max * j / (opt.e_samples - 1);
    for (double xi : xis) {
      const double R = canonical_solutions(xi, Eccentricity(e), T, catalog.cfg).sup_norm;
      if (R > running) {
        running = R;
        running_xi = xi;
      }
    }
    Lemma1Row row;
    row.e = e;
    row.R1 = static_cast<double>(first_root(e, N, catalog.r0));
    row.R_measured = running;
    row.xi_at_max = running_xi;
    cert.rows.push_back(row);

    auto fail = [&](const std::string& what) {
      cert.passed = false;
      cert.failures.push_back(what + " at e = " + sci(e) + ", xi = " + sci(running_xi));
    };
    const double slack = 1e-9 * row.R1;
    if (cert.r0 > row.R1 + slack) fail("r0 > R_{1,e}");
    if (row.R_measured > row.R1 + slack) fail("R_e > R_{1,e}");
    if (row.R1 > cert.R_cal + 1e-9 * cert.R_cal) fail("R_{1,e} > R");
  }
  return cert;
}

bool AuditReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.violations == 0; });
}

AuditReport coefficient_audit(int N, double xi_max, int samples, std::uint64_t seed, double e_max,
                              const OrbitConfig& cfg) {
  if (samples < 1) throw DomainError("coefficient_audit: samples must be positive");
  if (!(e_max >= 0.0 && e_max < 1.0) || !(xi_max > 0.0)) throw DomainError("coefficient_audit: bad sampling box");
  OrbitConfig c = cfg;
  c.N = N;
  const double T = N * std::numbers::pi;

  AuditReport rep;
  rep.samples = samples;
  rep.checks = {{"|a| <= sigma", 0, 0},
                {"|da/dz| <= 12 sigma/(1-e)", 0, 0},
                {"|da/dr| <= 12 sigma/(1-e)", 0, 0},
                {"|dr/de| <= 1/(2(1-e))", 0, 0},
                {"|dz/de| <= 3 N pi sigma R_e^2/(2(1-e))", 0, 0},
                {"|da/de| <= 6 sigma (1 + 3 N pi sigma R_e^2)/(1-e)^2", 0, 0},
                {"|p| <= 12/(1-e)^4", 0, 0}};
  auto record = [&](std::size_t k, double measured, double bound) {
    const double ratio = measured / bound;
    rep.checks[k].worst_ratio = std::max(rep.checks[k].worst_ratio, ratio);
    if (ratio > 1.0) ++rep.checks[k].violations;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    const double xi = xi_max * (1.0 - U(rng));  // (0, xi_max]
    const double e = e_max * U(rng);
    const double t = T * U(rng);
    const Eccentricity ecc(e);
    const double Re = canonical_solutions(xi, ecc, T, c).sup_norm;
    const AugmentedState st = propagate(xi, ecc, t, c);
    const RadiusSample rs = radius_sample(t, e, N);
    const FieldTerms ft = field_terms(st.z, rs.r);

    const double om = 1.0 - e;
    const double sg = 16.0 / (om * om * om);
    const double da_de = ft.da_dz * st.beta + ft.da_dr * rs.dr_de;
    record(0, std::abs(ft.a), sg);
    record(1, std::abs(ft.da_dz), 12.0 * sg / om);
    record(2, std::abs(ft.da_dr), 12.0 * sg / om);
    record(3, std::abs(rs.dr_de), 0.5 / om);
    record(4, std::abs(st.beta), 3.0 * T * sg * Re * Re / (2.0 * om));
    record(5, std::abs(da_de), 6.0 * sg * (1.0 + 3.0 * T * sg * Re * Re) / (om * om));
    record(6, std::abs(sensitivity_source(st.z, rs)), 12.0 / std::pow(om, 4));
  }
  return rep;
}

}  // namespace sitnikov
