#pragma once

// Linear stability of the branches: the discriminant Delta(e) (trace of the
// monodromy of y'' + q(t, e) y = 0 along the periodic solution), its
// derivatives at e = 0, and the quantified elliptic/hyperbolic interval
// obtained from the Taylor bound
//   |Delta(l) - 2 - Delta''(0) l^2 / 2| <= K l^3 / 6.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sitnikov/continuation.hpp"

namespace sitnikov {

/// The branch through (xi_p, 0) on [-reach, reach] (only [0, reach] for even N),
/// with xi(e) recovered by Newton from the nearest traced point.
class HillContext {
 public:
  HillContext(const CircularCatalog& catalog, int p, double reach = 0.05);

  int N() const { return N_; }
  int p() const { return p_; }
  double xi_p() const { return xi_p_; }
  double reach() const { return reach_; }
  const OrbitConfig& cfg() const { return cfg_; }
  const Branch& positive() const { return pos_; }
  const Branch& negative() const { return neg_; }

  /// H(e). Throws ContextError outside the traced range.
  double xi(double e) const;

  /// q(t, e) = (r^2 - 2 Z^2) / (Z^2 + r^2)^{5/2} along the branch solution.
  double q(double t, double e) const;

 private:
  int N_ = 1;
  int p_ = 1;
  double xi_p_ = 0.0;
  double reach_ = 0.0;
  OrbitConfig cfg_;
  Branch pos_, neg_;
};

/// Delta(e) = y1(2 N pi) + y2'(2 N pi). Throws ContextError if the monodromy
/// determinant differs from 1 by more than 1e-8.
double discriminant(const HillContext& ctx, double e);

/// Full monodromy at e on the branch.
Monodromy branch_monodromy(const HillContext& ctx, double e);

/// Delta'(0) = y1'(2 N pi, 0) * int_0^{2 N pi} y2(s,0)^2 dq/de(s,0) ds, with
/// dq/de = da/dz (phi1 H'(0) + beta) + da/dr dr/de, Clenshaw-Curtis on the
/// sampled trajectory.
double discriminant_derivative_at_zero(const HillContext& ctx);

struct FitDiagnostics {
  double h = 0.0;
  double c2 = 0.0, c4 = 0.0, c6 = 0.0;  // even fit of Delta - 2 on width h
  double c2_half = 0.0;                 // same at width h/2
  double c2_richardson = 0.0;           // (64 c2(h/2) - c2(h)) / 63
  double residual = 0.0;                // max abs residual of the even fit
  double odd_residual = 0.0;            // max |Delta(e) - Delta(-e)| over the stencil (odd N)
  double Delta1_fit = 0.0;              // linear coefficient of an unconstrained fit
  std::vector<double> stencil_e, stencil_Delta;
};

struct SecondDerivative {
  double Delta2_0 = 0.0;  // 2 c2
  FitDiagnostics fit;
};

/// Least-squares fit of Delta(e) - 2 by c2 e^2 + c4 e^4 + c6 e^6 on the
/// 13-point stencil e = k h / 6, k = -6..6 (k = 0..12 over [0, h] for even N,
/// with odd powers admitted), repeated at h/2. Requires h in [1e-3, 5e-2] and
/// h <= ctx.reach(). Throws Error if the fit residual exceeds 1e-8 |c2|.
SecondDerivative second_derivative_at_zero(const HillContext& ctx, double h = 0.02);

/// Same fit without the conditioning guard.
SecondDerivative fit_second_derivative(const HillContext& ctx, double h = 0.02);

/// Fit residual <= 1e-8 |c2|.
bool well_conditioned(const FitDiagnostics& fit);

/// c2(h) and c2(h/2) agree in sign and differ by less than |c2(h)|.
bool sign_resolved(const FitDiagnostics& fit);

/// K = max(1, 1.5 sup_{[0, e*]} |Delta'''|), Delta''' taken from the fitted
/// polynomial (24 c4 e + 120 c6 e^3).
double k_constant(const FitDiagnostics& fit, double e_star);

enum class Verdict { elliptic, hyperbolic, inconclusive };

const char* to_string(Verdict v);

struct StabilityReport {
  int N = 1;
  int p = 1;
  double Delta0 = 0.0;
  double Delta1_0 = 0.0;
  double Delta2_0 = 0.0;
  double K_cal = 1.0;
  double mu = 0.0;                  // 3 |Delta''(0)| / K
  std::optional<double> mu0;        // positive root of K l^3 - 3 Delta''(0) l^2 - 24
  double mu0_quadratic = 0.0;       // root with the cubic term dropped, sqrt(8 / |Delta''(0)|)
  double p_at_e_star = 0.0;
  double e_star = 0.0;
  double e_cert = 0.0;              // certified interval (0, e_cert)
  Verdict classification = Verdict::inconclusive;
  std::string note;                 // why the verdict is inconclusive
  FitDiagnostics fit;
  std::vector<std::pair<double, double>> Delta_curve;
};

/// Noise floor for |Delta''(0)|; below it the sign must be resolved by the
/// h/2 stencil on a well-conditioned fit, else the verdict is inconclusive.
inline constexpr double kDelta2NoiseFloor = 1e-4;

/// Positive root of p(l) = K l^3 - 3 d2 l^2 - 24 by bisection to 1e-10 (exists for K > 0).
double cubic_root_mu0(double K, double d2);

/// Certified interval: Delta''(0) > 0 -> hyperbolic on (0, min(mu, e*));
/// Delta''(0) < 0 -> elliptic on (0, min(mu, mu0, e*)) if p(e*) > 0, else (0, min(mu, e*)).
StabilityReport classify(int N, int p, double Delta2_0, double K, double e_star, const FitDiagnostics& fit);

/// End-to-end: Delta(0), Delta'(0) by quadrature, Delta''(0) by fitting, K,
/// classification, and the Delta curve on `curve_points` points of [-reach, reach].
StabilityReport stability_report(const HillContext& ctx, double e_star, double h = 0.02, int curve_points = 21);

/// JSON of the scalar fields and fit diagnostics.
void write_stability_json(std::ostream& out, const StabilityReport& rep);

/// CSV e,Delta,flag with flag in {elliptic, hyperbolic, parabolic}.
void write_delta_csv(std::ostream& out, const StabilityReport& rep);

}  // namespace sitnikov
