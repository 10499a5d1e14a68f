#include "sitnikov/stability.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <ostream>

#include "sitnikov/errors.hpp"
#include "sitnikov/format.hpp"
#include "sitnikov/quadrature.hpp"

namespace sitnikov {

HillContext::HillContext(const CircularCatalog& catalog, int p, double reach)
    : N_(catalog.N), p_(p), reach_(reach), cfg_(catalog.cfg) {
  if (p < 1 || p > catalog.nu) throw DomainError("HillContext: p outside 1..nu");
  if (!(reach > 0.0 && reach < kLaplaceLimit)) throw DomainError("HillContext: reach must lie in (0, L)");
  cfg_.N = N_;
  xi_p_ = catalog.xi(p);
  TraceOptions opt;
  opt.diagnostics = false;
  pos_ = trace_branch(catalog, p, reach, opt);
  if (pos_.termination_reason != Termination::reached_e_max)
    throw ContextError("HillContext: positive branch stopped before the requested reach");
  if (N_ % 2 == 1) {
    neg_ = trace_branch_negative(catalog, p, -reach, opt);
    if (neg_.termination_reason != Termination::reached_e_max)
      throw ContextError("HillContext: negative branch stopped before the requested reach");
  }
}

double HillContext::xi(double e) const {
  if (e > reach_ + 1e-12 || e < -reach_ - 1e-12 || (e < 0.0 && neg_.points.empty()))
    throw ContextError("HillContext: e = " + sci(e) + " outside the traced branch");
  try {
    return branch_xi_at(e < 0.0 ? neg_ : pos_, e, cfg_);
  } catch (const DomainError& err) {
    throw ContextError(std::string("HillContext: ") + err.what());
  }
}

double HillContext::q(double t, double e) const {
  const AugmentedState s = propagate(xi(e), Eccentricity(e), t, cfg_);
  return field_terms(s.z, radius_sample(t, e, N_).r).a;
}

Monodromy branch_monodromy(const HillContext& ctx, double e) {
  return monodromy(ctx.xi(e), Eccentricity(e), ctx.cfg());
}

double discriminant(const HillContext& ctx, double e) {
  const Monodromy m = branch_monodromy(ctx, e);
  if (std::abs(m.det() - 1.0) > 1e-8) throw ContextError("discriminant: monodromy determinant differs from 1");
  return m.trace();
}

double discriminant_derivative_at_zero(const HillContext& ctx) {
  const BranchPoint& start = ctx.positive().points.front();
  if (start.e != 0.0 || start.dF_dxi == 0.0) throw ContextError("discriminant_derivative_at_zero: no sensitivity at e = 0");
  const double H1 = -start.dF_de / start.dF_dxi;
  const int N = ctx.N();
  const double period = 2.0 * N * std::numbers::pi;
  const Trajectory tr = flow(start.xi, Eccentricity(0.0), period, ctx.cfg());
  const std::vector<double> w = quad::clenshaw_curtis_weights(period, tr.size() - 1);
  double integral = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const RadiusSample rs = radius_sample(tr.times[k], 0.0, N);
    const FieldTerms ft = field_terms(tr.z[k], rs.r);
    const double dZ_de = tr.dz_dxi[k] * H1 + tr.dz_de[k];
    const double dq_de = ft.da_dz * dZ_de + ft.da_dr * rs.dr_de;
    integral += w[k] * tr.phi2[k] * tr.phi2[k] * dq_de;
  }
  return tr.dz_dot_dxi.back() * integral;
}

namespace {

struct Fit {
  Eigen::VectorXd coef;  // by power, index 0 = e^1
  double residual = 0.0;
};

// Least squares of y by sum_j c_j e^{powers[j]}, columns scaled by h^{power}.
Fit poly_fit(const std::vector<double>& e, const std::vector<double>& y, const std::vector<int>& powers, double h) {
  const auto m = static_cast<Eigen::Index>(e.size());
  const auto n = static_cast<Eigen::Index>(powers.size());
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = std::pow(e[i] / h, powers[j]);
    b(i) = y[i];
  }
  const Eigen::VectorXd a = A.colPivHouseholderQr().solve(b);
  Fit f;
  f.residual = (A * a - b).cwiseAbs().maxCoeff();
  f.coef = Eigen::VectorXd::Zero(7);
  for (Eigen::Index j = 0; j < n; ++j) f.coef(powers[j] - 1) = a(j) / std::pow(h, powers[j]);
  return f;
}

struct Stencil {
  std::vector<double> e, d;  // d = Delta - 2
};

Stencil sample_stencil(const HillContext& ctx, double h) {
  Stencil s;
  const bool odd = ctx.N() % 2 == 1;
  for (int k = odd ? -6 : 0; k <= (odd ? 6 : 12); ++k) {
    const double e = odd ? k * h / 6.0 : k * h / 12.0;
    s.e.push_back(e);
    s.d.push_back(discriminant(ctx, e) - 2.0);
  }
  return s;
}

Fit fit_even(const HillContext& ctx, const Stencil& s, double h) {
  if (ctx.N() % 2 == 1) return poly_fit(s.e, s.d, {2, 4, 6}, h);
  return poly_fit(s.e, s.d, {1, 2, 3, 4, 5, 6}, h);
}

}  // namespace

SecondDerivative fit_second_derivative(const HillContext& ctx, double h) {
  if (!(h >= 1e-3 && h <= 5e-2)) throw DomainError("second_derivative_at_zero: h must lie in [1e-3, 5e-2]");
  if (h > ctx.reach() + 1e-12) throw DomainError("second_derivative_at_zero: stencil exceeds the traced branch");
  const Stencil s = sample_stencil(ctx, h);
  const Stencil s_half = sample_stencil(ctx, 0.5 * h);
  const Fit f = fit_even(ctx, s, h);
  const Fit f_half = fit_even(ctx, s_half, 0.5 * h);

  SecondDerivative out;
  FitDiagnostics& d = out.fit;
  d.h = h;
  d.c2 = f.coef(1);
  d.c4 = f.coef(3);
  d.c6 = f.coef(5);
  d.c2_half = f_half.coef(1);
  d.c2_richardson = (64.0 * d.c2_half - d.c2) / 63.0;
  d.residual = f.residual;
  d.stencil_e = s.e;
  for (double v : s.d) d.stencil_Delta.push_back(v + 2.0);
  if (ctx.N() % 2 == 1) {
    const std::size_t n = s.e.size();
    for (std::size_t i = 0; i < n; ++i) d.odd_residual = std::max(d.odd_residual, std::abs(s.d[i] - s.d[n - 1 - i]));
    d.Delta1_fit = poly_fit(s.e, s.d, {1, 2, 3, 4, 5, 6}, h).coef(0);
  } else {
    d.Delta1_fit = f.coef(0);
  }
  out.Delta2_0 = 2.0 * d.c2;
  return out;
}

bool well_conditioned(const FitDiagnostics& fit) { return fit.residual <= 1e-8 * std::abs(fit.c2); }

bool sign_resolved(const FitDiagnostics& fit) {
  return fit.c2 != 0.0 && (fit.c2 > 0.0) == (fit.c2_half > 0.0) && std::abs(fit.c2 - fit.c2_half) < std::abs(fit.c2);
}

SecondDerivative second_derivative_at_zero(const HillContext& ctx, double h) {
  SecondDerivative out = fit_second_derivative(ctx, h);
  if (!well_conditioned(out.fit))
    throw Error("second_derivative_at_zero: ill-conditioned stencil (fit residual " + sci(out.fit.residual) + ")");
  return out;
}

double k_constant(const FitDiagnostics& fit, double e_star) {
  if (!(e_star > 0.0)) throw DomainError("k_constant: e_star must be positive");
  // |24 c4 e + 120 c6 e^3| is maximized at an endpoint or at a critical point of the cubic.
  auto d3 = [&](double e) { return std::abs(24.0 * fit.c4 * e + 120.0 * fit.c6 * e * e * e); };
  double sup = std::max(d3(0.0), d3(e_star));
  for (int k = 1; k < 64; ++k) sup = std::max(sup, d3(e_star * k / 64.0));
  return std::max(1.0, 1.5 * sup);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::elliptic: return "elliptic";
    case Verdict::hyperbolic: return "hyperbolic";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

double cubic_root_mu0(double K, double d2) {
  if (!(K > 0.0)) throw DomainError("cubic_root_mu0: K must be positive");
  auto p = [&](double l) { return K * l * l * l - 3.0 * d2 * l * l - 24.0; };
  double lo = 0.0, hi = 1.0;
  while (p(hi) <= 0.0) hi *= 2.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (p(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

StabilityReport classify(int N, int p, double Delta2_0, double K, double e_star, const FitDiagnostics& fit) {
  StabilityReport r;
  r.N = N;
  r.p = p;
  r.Delta2_0 = Delta2_0;
  r.K_cal = K;
  r.e_star = e_star;
  r.fit = fit;
  r.mu = 3.0 * std::abs(Delta2_0) / K;
  r.mu0 = cubic_root_mu0(K, Delta2_0);
  if (Delta2_0 < 0.0) r.mu0_quadratic = std::sqrt(8.0 / std::abs(Delta2_0));
  r.p_at_e_star = K * e_star * e_star * e_star - 3.0 * Delta2_0 * e_star * e_star - 24.0;

  if (std::abs(Delta2_0) < kDelta2NoiseFloor && !(sign_resolved(fit) && well_conditioned(fit))) {
    r.classification = Verdict::inconclusive;
    r.e_cert = 0.0;
    r.note = "|Delta''(0)| below the noise floor and not resolved by the h/2 stencil";
  } else if (Delta2_0 > 0.0) {
    r.classification = Verdict::hyperbolic;
    r.e_cert = std::min(r.mu, e_star);
  } else {
    r.classification = Verdict::elliptic;
    r.e_cert = r.p_at_e_star > 0.0 ? std::min({r.mu, *r.mu0, e_star}) : std::min(r.mu, e_star);
  }
  return r;
}

StabilityReport stability_report(const HillContext& ctx, double e_star, double h, int curve_points) {
  if (curve_points < 2) throw DomainError("stability_report: curve_points must be >= 2");
  // A flat discriminant (tiny c2) trips the conditioning guard; classify then
  // reports it as inconclusive instead of failing the whole report.
  const SecondDerivative sd = fit_second_derivative(ctx, h);
  if (!well_conditioned(sd.fit) && std::abs(sd.Delta2_0) >= kDelta2NoiseFloor)
    throw Error("stability_report: ill-conditioned stencil (fit residual " + sci(sd.fit.residual) + ")");
  const double K = k_constant(sd.fit, e_star);
  StabilityReport r = classify(ctx.N(), ctx.p(), sd.Delta2_0, K, e_star, sd.fit);
  r.Delta0 = discriminant(ctx, 0.0);
  r.Delta1_0 = discriminant_derivative_at_zero(ctx);
  const double lo = ctx.N() % 2 == 1 ? -ctx.reach() : 0.0;
  for (int k = 0; k < curve_points; ++k) {
    const double e = lo + (ctx.reach() - lo) * k / (curve_points - 1);
    r.Delta_curve.emplace_back(e, discriminant(ctx, e));
  }
  return r;
}

void write_stability_json(std::ostream& out, const StabilityReport& r) {
  nlohmann::ordered_json j;
  j["N"] = r.N;
  j["p"] = r.p;
  j["Delta0"] = r.Delta0;
  j["Delta1_0"] = r.Delta1_0;
  j["Delta2_0"] = r.Delta2_0;
  j["K"] = r.K_cal;
  j["mu"] = r.mu;
  j["mu0"] = r.mu0 ? nlohmann::ordered_json(*r.mu0) : nlohmann::ordered_json(nullptr);
  j["mu0_quadratic"] = r.mu0_quadratic;
  j["p_at_e_star"] = r.p_at_e_star;
  j["e_star"] = r.e_star;
  j["certified_interval"] = {0.0, r.e_cert};
  j["classification"] = to_string(r.classification);
  if (!r.note.empty()) j["note"] = r.note;
  j["fit"] = {{"h", r.fit.h},
              {"c2", r.fit.c2},
              {"c4", r.fit.c4},
              {"c6", r.fit.c6},
              {"c2_half", r.fit.c2_half},
              {"c2_richardson", r.fit.c2_richardson},
              {"residual", r.fit.residual},
              {"odd_residual", r.fit.odd_residual},
              {"Delta1_fit", r.fit.Delta1_fit}};
  out << j.dump(2) << '\n';
}

void write_delta_csv(std::ostream& out, const StabilityReport& r) {
  out << "e,Delta,flag\n";
  for (const auto& [e, D] : r.Delta_curve) out << sci(e) << ',' << sci(D) << ',' << to_string(classify_trace(D)) << '\n';
}

}  // namespace sitnikov
