#pragma once

// Natural-parameter continuation of the branches xi = H(e) of even
// 2N pi-periodic solutions, F_N(H(e), e) = 0, starting from the circular
// catalog; Floquet multipliers along the branch; the symmetry of the odd-N
// branches under e -> -e; the amplitude audit |Z| <= xi_p + gamma e.

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "sitnikov/bounds.hpp"

namespace sitnikov {

/// |dF/dxi| below this is treated as a fold of the branch.
inline constexpr double kFoldThreshold = 1e-8;

enum class StabilityClass { elliptic, hyperbolic, parabolic };

const char* to_string(StabilityClass c);

/// Classifies a discriminant: |trace| < 2 - band elliptic, > 2 + band hyperbolic.
StabilityClass classify_trace(double trace, double band = 1e-9);

struct Monodromy {
  double y1 = 0.0, y1_dot = 0.0, y2 = 0.0, y2_dot = 0.0;  // canonical pair at 2 N pi

  double trace() const { return y1 + y2_dot; }
  double det() const { return y1 * y2_dot - y2 * y1_dot; }
  /// Eigenvalues of the monodromy matrix, rho1 first (Im rho1 >= 0, or |rho1| >= |rho2| when real).
  std::pair<std::complex<double>, std::complex<double>> multipliers() const;
};

/// Monodromy of the variational equation along the solution starting at (xi, 0).
Monodromy monodromy(double xi, Eccentricity e, const OrbitConfig& cfg);

struct BranchPoint {
  double e = 0.0;
  double xi = 0.0;
  double F_residual = 0.0;
  double dF_dxi = 0.0;
  double dF_de = 0.0;
  double z_sup = 0.0;  // max |Z_e| over a period
  std::complex<double> rho1, rho2;
  double trace = 0.0;
  StabilityClass stability = StabilityClass::parabolic;
};

enum class Termination { reached_e_max, fold_detected, residual_failure };

const char* to_string(Termination t);

struct Branch {
  int N = 1;
  int p = 1;
  std::vector<BranchPoint> points;  // ordered by e, in the direction of travel
  double e_star_certified = 0.0;
  Termination termination_reason = Termination::reached_e_max;
};

struct TraceOptions {
  double step = 1e-3;
  double min_step = 1e-7;
  double newton_tol = 1e-10;
  int max_newton = 8;
  bool diagnostics = true;  // z_sup and multipliers at every accepted point
};

/// h(e, xi) = -dF/de / dF/dxi. Throws NearFoldError if |dF/dxi| < kFoldThreshold
/// (xi = 0 is the trivial branch, where h = 0).
double continuation_rhs(double e, double xi, int N, const OrbitConfig& cfg);

/// Newton on xi -> F_N(xi, e) from xi0 until |F| <= tol within max_iter steps;
/// returns the converged point (diagnostics not filled). Throws Error on
/// non-convergence and NearFoldError near a fold.
BranchPoint correct(double xi0, double e, int N, const OrbitConfig& cfg, double tol = 1e-10, int max_iter = 8);

/// Fills z_sup, multipliers, trace and stability of a corrected point.
void add_diagnostics(BranchPoint& pt, int N, const OrbitConfig& cfg);

/// Euler predictor / Newton corrector from (xi0, e0) toward e_end (either
/// direction), halving the step on corrector failure; gives up below
/// min(min_step, step).
Branch trace_from(int N, int p, double xi0, double e0, double e_end, const OrbitConfig& cfg,
                  const TraceOptions& opt = {});

/// Branch p of the catalog on [0, e_max].
Branch trace_branch(const CircularCatalog& catalog, int p, double e_max, const TraceOptions& opt = {});

/// Branch p on [e_min, 0] (e_min < 0) through the reflected radius; N odd,
/// |e_min| below the Laplace limit.
Branch trace_branch_negative(const CircularCatalog& catalog, int p, double e_min, const TraceOptions& opt = {});

/// xi on the branch at e: an exact grid hit, otherwise Newton from the
/// Euler prediction off the nearest point.
double branch_xi_at(const Branch& branch, double e, const OrbitConfig& cfg);

struct Lemma3Check {
  double e = 0.0;
  double xi_pos = 0.0;        // H(e)
  double xi_neg = 0.0;        // H(-e)
  double xi_predicted = 0.0;  // (-1)^p z(N pi; H(e), e)
  double relation_error = 0.0;     // |xi_neg - xi_predicted|
  double trajectory_error = 0.0;   // max_t |Z_{-e}(t) - (-1)^p Z_e(t + N pi)|
};

/// Checks H(-e) = (-1)^p z(N pi; H(e), e) and Z_{-e}(t) = (-1)^p Z_e(t + N pi)
/// on `grid` points of [0, 2 N pi]. xi_pos and xi_neg come from the traced branches.
Lemma3Check lemma3_check(int N, int p, double e, double xi_pos, double xi_neg, const OrbitConfig& cfg,
                         int grid = 64);

struct Theorem1Audit {
  int checked = 0;
  double min_margin = 0.0;  // min of xi_p + gamma e - z_sup
  bool passed = true;
  std::vector<std::string> failures;
};

/// z_sup <= xi_p + gamma e at every branch point with 0 <= e <= e*; a slack of
/// 1e-10 absorbs the refinement tolerance at e = 0.
Theorem1Audit verify_theorem1(const Branch& branch, const BoundsLedger& ledger);

/// CSV e,xi,z_sup,F_residual,re_rho1,im_rho1,classification; classification
/// "n/a" when with_classification is false.
void write_branch_csv(std::ostream& out, const Branch& branch, bool with_classification = true);

}  // namespace sitnikov
