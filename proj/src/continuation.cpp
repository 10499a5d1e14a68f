#include "sitnikov/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <numbers>
#include <ostream>

#include "sitnikov/errors.hpp"
#include "sitnikov/format.hpp"

namespace sitnikov {

namespace {

OrbitConfig with_N(const OrbitConfig& cfg, int N) {
  OrbitConfig c = cfg;
  c.N = N;
  return c;
}

}  // namespace

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::elliptic: return "elliptic";
    case StabilityClass::hyperbolic: return "hyperbolic";
    case StabilityClass::parabolic: return "parabolic";
  }
  return "?";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::reached_e_max: return "reached_e_max";
    case Termination::fold_detected: return "fold_detected";
    case Termination::residual_failure: return "residual_failure";
  }
  return "?";
}

StabilityClass classify_trace(double trace, double band) {
  if (std::abs(trace) < 2.0 - band) return StabilityClass::elliptic;
  if (std::abs(trace) > 2.0 + band) return StabilityClass::hyperbolic;
  return StabilityClass::parabolic;
}

std::pair<std::complex<double>, std::complex<double>> Monodromy::multipliers() const {
  const double tr = trace();
  const double disc = tr * tr - 4.0 * det();
  if (disc < 0.0) {
    const double im = 0.5 * std::sqrt(-disc);
    return {{0.5 * tr, im}, {0.5 * tr, -im}};
  }
  // Real pair: the larger one from the stable formula, the other from the product.
  const double big = 0.5 * (tr + std::copysign(std::sqrt(disc), tr));
  if (big == 0.0) return {{0.0, 0.0}, {0.0, 0.0}};
  return {{big, 0.0}, {det() / big, 0.0}};
}

Monodromy monodromy(double xi, Eccentricity e, const OrbitConfig& cfg) {
  const AugmentedState s = propagate(xi, e, 2.0 * cfg.N * std::numbers::pi, cfg);
  return {s.phi1, s.phi1_dot, s.phi2, s.phi2_dot};
}

double continuation_rhs(double e, double xi, int N, const OrbitConfig& cfg) {
  if (xi == 0.0) return 0.0;
  const ShootingValue sv = shooting_value(xi, Eccentricity(e), N, cfg);
  if (std::abs(sv.dF_dxi) < kFoldThreshold) throw NearFoldError(e, xi, sv.dF_dxi);
  return -sv.dF_de / sv.dF_dxi;
}

BranchPoint correct(double xi0, double e, int N, const OrbitConfig& cfg, double tol, int max_iter) {
  const Eccentricity ecc(e);
  double xi = xi0;
  for (int it = 0; it <= max_iter; ++it) {
    const ShootingValue sv = shooting_value(xi, ecc, N, cfg);
    if (std::abs(sv.F) <= tol) {
      BranchPoint pt;
      pt.e = e;
      pt.xi = xi;
      pt.F_residual = sv.F;
      pt.dF_dxi = sv.dF_dxi;
      pt.dF_de = sv.dF_de;
      return pt;
    }
    if (it == max_iter) break;
    if (std::abs(sv.dF_dxi) < kFoldThreshold) throw NearFoldError(e, xi, sv.dF_dxi);
    xi -= sv.F / sv.dF_dxi;
    if (!(xi > 0.0)) throw Error("correct: Newton left xi > 0");
  }
  throw Error("correct: Newton did not reach the residual tolerance");
}

void add_diagnostics(BranchPoint& pt, int N, const OrbitConfig& cfg) {
  const OrbitConfig c = with_N(cfg, N);
  const Eccentricity ecc(pt.e);
  // Even and 2N pi-periodic: |Z| on [0, N pi] covers the whole period.
  const Trajectory traj = flow(pt.xi, ecc, N * std::numbers::pi, c);
  pt.z_sup = refined_sup(traj, &AugmentedState::z, c);
  const Monodromy m = monodromy(pt.xi, ecc, c);
  std::tie(pt.rho1, pt.rho2) = m.multipliers();
  pt.trace = m.trace();
  pt.stability = classify_trace(pt.trace);
}

Branch trace_from(int N, int p, double xi0, double e0, double e_end, const OrbitConfig& cfg,
                  const TraceOptions& opt) {
  if (!(opt.step > 0.0) || !(opt.min_step > 0.0)) throw DomainError("trace_from: step sizes must be positive");
  const OrbitConfig c = with_N(cfg, N);
  c.validate();
  Branch br;
  br.N = N;
  br.p = p;

  BranchPoint cur = correct(xi0, e0, N, c, opt.newton_tol, opt.max_newton);
  if (opt.diagnostics) add_diagnostics(cur, N, c);
  br.points.push_back(cur);

  const double dir = (e_end >= e0) ? 1.0 : -1.0;
  double h = opt.step;
  bool saw_fold = false;
  while (dir * (e_end - cur.e) > 0.0) {
    const double remaining = dir * (e_end - cur.e);
    const double dh = std::min(h, remaining);
    const double e_next = (dh == remaining) ? e_end : cur.e + dir * dh;
    const double slope = -cur.dF_de / cur.dF_dxi;
    const double xi_pred = cur.xi + (e_next - cur.e) * slope;
    try {
      BranchPoint nxt = correct(xi_pred, e_next, N, c, opt.newton_tol, opt.max_newton);
      // A corrector that lands far from the prediction has jumped branches.
      if (std::abs(nxt.xi - xi_pred) > 0.05)
        throw Error("trace_from: corrector jumped");
      if (std::abs(nxt.dF_dxi) < kFoldThreshold) throw NearFoldError(e_next, nxt.xi, nxt.dF_dxi);
      if (opt.diagnostics) add_diagnostics(nxt, N, c);
      br.points.push_back(nxt);
      cur = nxt;
      h = std::min(opt.step, 2.0 * h);
      saw_fold = false;
      continue;
    } catch (const NearFoldError&) {
      saw_fold = true;
    } catch (const Error&) {
    }
    h *= 0.5;
    if (h < std::min(opt.min_step, opt.step)) {
      br.termination_reason = saw_fold || std::abs(cur.dF_dxi) < 1e-3 ? Termination::fold_detected
                                                                      : Termination::residual_failure;
      return br;
    }
  }
  br.termination_reason = Termination::reached_e_max;
  return br;
}

Branch trace_branch(const CircularCatalog& catalog, int p, double e_max, const TraceOptions& opt) {
  if (p < 1 || p > catalog.nu) throw DomainError("trace_branch: p outside 1..nu");
  if (!(e_max >= 0.0 && e_max < 1.0)) throw DomainError("trace_branch: e_max must lie in [0, 1)");
  return trace_from(catalog.N, p, catalog.xi(p), 0.0, e_max, catalog.cfg, opt);
}

Branch trace_branch_negative(const CircularCatalog& catalog, int p, double e_min, const TraceOptions& opt) {
  if (p < 1 || p > catalog.nu) throw DomainError("trace_branch_negative: p outside 1..nu");
  if (catalog.N % 2 == 0) throw DomainError("trace_branch_negative: N must be odd");
  if (!(e_min <= 0.0 && -e_min < kLaplaceLimit)) throw DomainError("trace_branch_negative: need -L < e_min <= 0");
  return trace_from(catalog.N, p, catalog.xi(p), 0.0, e_min, catalog.cfg, opt);
}

double branch_xi_at(const Branch& branch, double e, const OrbitConfig& cfg) {
  if (branch.points.empty()) throw DomainError("branch_xi_at: empty branch");
  const auto it = std::min_element(branch.points.begin(), branch.points.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.e - e) < std::abs(b.e - e);
  });
  if (std::abs(it->e - e) > 0.01) throw DomainError("branch_xi_at: e outside the traced range");
  if (std::abs(it->e - e) < 1e-14) return it->xi;
  const double pred = it->xi + (e - it->e) * (-it->dF_de / it->dF_dxi);
  return correct(pred, e, branch.N, cfg).xi;
}

Lemma3Check lemma3_check(int N, int p, double e, double xi_pos, double xi_neg, const OrbitConfig& cfg, int grid) {
  if (N % 2 == 0) throw DomainError("lemma3_check: N must be odd");
  if (grid < 2) throw DomainError("lemma3_check: grid must be >= 2");
  const OrbitConfig c = with_N(cfg, N);
  const double T = N * std::numbers::pi;
  const double sign = (p % 2 == 0) ? 1.0 : -1.0;
  Lemma3Check chk;
  chk.e = e;
  chk.xi_pos = xi_pos;
  chk.xi_neg = xi_neg;

  const Eccentricity ep(e), en(-e);
  AugmentedState pos = propagate(xi_pos, ep, T, c);
  chk.xi_predicted = sign * pos.z;
  chk.relation_error = std::abs(xi_neg - chk.xi_predicted);

  AugmentedState neg = AugmentedState::initial(xi_neg);
  double t_prev = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double t = 2.0 * T * k / (grid - 1);
    if (k > 0) {
      pos = propagate_from(t_prev + T, pos, t + T, ep, c);
      neg = propagate_from(t_prev, neg, t, en, c);
    }
    chk.trajectory_error = std::max(chk.trajectory_error, std::abs(neg.z - sign * pos.z));
    t_prev = t;
  }
  return chk;
}

Theorem1Audit verify_theorem1(const Branch& branch, const BoundsLedger& ledger) {
  if (branch.N != ledger.N || branch.p != ledger.p) throw DomainError("verify_theorem1: branch and ledger differ in (N, p)");
  Theorem1Audit audit;
  audit.min_margin = std::numeric_limits<double>::infinity();
  const double e_star = static_cast<double>(ledger.e_star);
  for (const auto& pt : branch.points) {
    if (pt.e < 0.0 || pt.e > e_star) continue;
    ++audit.checked;
    const double margin = ledger.amplitude_bound(pt.e) - pt.z_sup;
    audit.min_margin = std::min(audit.min_margin, margin);
    if (margin < -1e-10) {
      audit.passed = false;
      audit.failures.push_back("z_sup = " + sci(pt.z_sup) + " exceeds G(e) at e = " + sci(pt.e));
    }
  }
  if (audit.checked == 0) {
    audit.passed = false;
    audit.failures.push_back("no branch point inside [0, e*]");
  }
  return audit;
}

void write_branch_csv(std::ostream& out, const Branch& branch, bool with_classification) {
  out << "e,xi,z_sup,F_residual,re_rho1,im_rho1,classification\n";
  for (const auto& pt : branch.points) {
    out << sci(pt.e) << ',' << sci(pt.xi) << ',' << sci(pt.z_sup) << ',' << sci(pt.F_residual) << ','
        << sci(pt.rho1.real()) << ',' << sci(pt.rho1.imag()) << ','
        << (with_classification ? to_string(pt.stability) : "n/a") << '\n';
  }
}

}  // namespace sitnikov
