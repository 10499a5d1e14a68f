#pragma once

// Explicit bound chain for the variational and continuation equations: the
// polynomial Q(e, R), the critical eccentricity E*, the continuation
// constants and the certified interval e* with amplitude slope gamma.
//
// Scalar arithmetic runs in long double; E* ~ 1e-10 multiplies constants of
// size 1e5 and the chain is sensitive to cancellation.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sitnikov/circular.hpp"

namespace sitnikov {

/// sigma(e) = 16 / (1 - e)^3, the bound on |a| and on 1/r^3.
long double sigma(long double e);

/// d(e, R) = 6 sigma (1 + 3 N pi sigma R^2) / (1 - e)^2.
long double d_bound(long double e, long double R, int N);

/// b1(e) = 9216 (N pi)^2 e / (1 - e)^8.
long double b1(long double e, int N);

/// b2(e) = 192 N pi e / (1 - e)^5.
long double b2(long double e, int N);

/// Q~(e, R) = b1 R^5 + b2 R^3 - R. Requires 0 <= e < 1, R >= 0.
long double q_tilde(long double e, long double R, int N);

/// Q(e, R) = Q~(e, R) + r0.
long double q_function(long double e, long double R, int N, long double r0);

/// Positive root R* of Q~(e, .). Requires 0 < e < 1.
long double r_star(long double e, int N);

/// Positive critical point of Q~(e, .):
/// R_m^2 = (sqrt(9 b2^2 + 20 b1) - 3 b2) / (10 b1), evaluated in the
/// cancellation-free form 2 / (sqrt(9 b2^2 + 20 b1) + 3 b2). Requires 0 < e < 1.
long double r_m(long double e, int N);

/// Q~_m(e) = Q~(e, R_m(e)) = -2 R_m^3 (2 b1 R_m^2 + b2).
long double q_tilde_min(long double e, int N);

/// E*: the root of Q~_m(e) = -r0 on (0, 1), bisection in log e to relative
/// 1e-12. Throws LedgerError if the bracket fails.
long double solve_E_star(long double r0, int N);

/// Leading order of E* for small e: Q~_m ~ -4 5^{-5/4} b1^{-1/4}, giving
/// 256 / (3125 r0^4 9216 (N pi)^2).
long double asymptotic_E_star(long double r0, int N);

/// R_{1,e}: the first positive root of Q(e, .) (bisection on (0, R_m(e))).
/// At e = 0 returns r0. Throws LedgerError when e > E*(r0).
long double first_root(long double e, int N, long double r0);

struct LedgerEntry {
  std::string symbol;
  long double value = 0.0L;
  std::string formula;
  std::vector<std::string> inputs;
};

struct BoundsLedger {
  int N = 1;
  int p = 1;
  long double r0 = 0.0L;
  long double b1_at_E_star = 0.0L;
  long double b2_at_E_star = 0.0L;
  long double E_star = 0.0L;
  long double R_cal = 0.0L;        // R_m(E*)
  long double sigma_star = 0.0L;   // sigma(E*)
  long double Upsilon = 0.0L;
  long double Psi = 0.0L;
  long double phi1dot_circ = 0.0L; // |phi1'(N pi, 0)| at xi_p
  long double phi1dot_period = 0.0L;  // |phi1'(2 N pi, 0)| at xi_p, diagnostic only
  long double E_hat = 0.0L;        // |phi1'(N pi, 0)| / (2 Psi)
  long double E_star2 = 0.0L;      // E** = min(E*, E_hat)
  long double Gamma = 0.0L;
  long double M = 0.0L;
  long double Delta_star = 0.0L;
  long double e_star = 0.0L;
  long double gamma = 0.0L;
  double xi_p = 0.0;
  std::vector<LedgerEntry> entries;

  /// Amplitude bound G(e) = xi_p + gamma e.
  double amplitude_bound(double e) const { return xi_p + static_cast<double>(gamma) * e; }
};

/// Builds the ledger for branch p of the catalog (which must carry r0).
/// E^ = |phi1'(N pi, 0)| / (2 Psi) keeps Gamma = |phi1'(N pi, 0)| - Psi E**
/// at least |phi1'(N pi, 0)| / 2; LedgerError if Gamma is still not positive.
BoundsLedger continuation_constants(const CircularCatalog& catalog, int p);

/// JSON {N, p, entries: [{symbol, value, formula, inputs}]}.
void write_ledger_json(std::ostream& out, const BoundsLedger& ledger);

struct Lemma1Row {
  double e = 0.0;
  double R1 = 0.0;          // R_{1,e}
  double R_measured = 0.0;  // running sup over mu <= e and the xi samples
  double xi_at_max = 0.0;
};

struct Lemma1Certificate {
  int N = 1;
  double r0 = 0.0;
  double R_cal = 0.0;
  std::vector<Lemma1Row> rows;
  bool passed = true;
  std::vector<std::string> failures;  // one message per offending (e, xi)
};

struct Lemma1Options {
  int e_samples = 5;
  int xi_samples = 17;  // uniform in [0, xi_star], plus every xi_p and the r0 maximizer
};

/// Samples e in [0, e_max] and checks r0 <= R_{1,e}, R_e <= R_{1,e} <= R_cal.
/// Requires e_max <= E*. Failures are reported, not thrown.
Lemma1Certificate lemma1_certify(const CircularCatalog& catalog, double e_max, const Lemma1Options& opt = {});

struct AuditCheck {
  std::string name;
  double worst_ratio = 0.0;  // max of measured / bound
  int violations = 0;
};

struct AuditReport {
  int samples = 0;
  std::vector<AuditCheck> checks;
  bool passed() const;
};

/// Pointwise coefficient bounds at random (t, xi, e), t in [0, N pi],
/// xi in (0, xi_max], e in [0, e_max], with R_e measured as the sup-norm of the
/// canonical pair of the sampled trajectory:
///   |a| <= sigma, |da/dz| <= 12 sigma/(1-e), |da/dr| <= 12 sigma/(1-e),
///   |dr/de| <= 1/(2(1-e)), |dz/de| <= 3 N pi sigma R_e^2 / (2(1-e)),
///   |da/de| <= 6 sigma (1 + 3 N pi sigma R_e^2)/(1-e)^2, |p| <= 12/(1-e)^4.
AuditReport coefficient_audit(int N, double xi_max, int samples, std::uint64_t seed, double e_max,
                              const OrbitConfig& cfg);

}  // namespace sitnikov
