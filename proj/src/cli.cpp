#include "sitnikov/cli.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sitnikov/bounds.hpp"
#include "sitnikov/circular.hpp"
#include "sitnikov/continuation.hpp"
#include "sitnikov/errors.hpp"
#include "sitnikov/format.hpp"
#include "sitnikov/parallel.hpp"
#include "sitnikov/stability.hpp"

namespace sitnikov::cli {

using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw DomainError("config: bad number for " + key + ": " + v);
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw DomainError("config: " + key + " must be an integer");
  return static_cast<int>(x);
}

std::ofstream open_out(const RunManifest& m, const std::string& name) {
  std::filesystem::create_directories(m.out_dir);
  std::ofstream f(m.out_dir / name);
  if (!f) throw Error("cannot open " + (m.out_dir / name).string());
  return f;
}

json config_meta(const RunManifest& m) {
  json j;
  j["abs_tol"] = m.cfg.abs_tol;
  j["rel_tol"] = m.cfg.rel_tol;
  j["sample_count"] = m.cfg.sample_count;
  return j;
}

json comparison_json(const std::vector<Comparison>& cs) {
  json arr = json::array();
  for (const auto& c : cs) {
    arr.push_back({{"symbol", c.ref.symbol},
                   {"computed", c.computed},
                   {"reference", c.ref.value},
                   {"error", c.error},
                   {"tolerance", c.ref.tol},
                   {"relative", c.ref.relative},
                   {"gating", c.ref.gating},
                   {"pass", c.pass}});
  }
  return arr;
}

void csv_meta(std::ostream& out, const RunManifest& m, const std::vector<Comparison>& cs) {
  out << "# integrator abs_tol=" << sci(m.cfg.abs_tol) << " rel_tol=" << sci(m.cfg.rel_tol)
      << " samples_per_pi=" << m.cfg.sample_count << '\n';
  for (const auto& c : cs) {
    out << "# reference " << c.ref.symbol << '=' << sci(c.ref.value) << " tol=" << sci(c.ref.tol)
        << (c.ref.relative ? " (relative)" : " (absolute)") << '\n';
  }
}

// Prints the comparison table; returns true if every gating comparison passes.
bool report(std::ostream& log, const std::vector<Comparison>& cs) {
  bool ok = true;
  for (const auto& c : cs) {
    const char* tag = c.pass ? "ok" : (c.ref.gating ? "MISMATCH" : "discrepancy");
    log << "  " << c.ref.symbol << ": computed " << sci(c.computed) << ", reference " << sci(c.ref.value) << ", "
        << (c.ref.relative ? "rel" : "abs") << " error " << sci(c.error) << " (tol " << sci(c.ref.tol) << ") " << tag
        << '\n';
    if (c.ref.gating && !c.pass) ok = false;
  }
  return ok;
}

CircularCatalog catalog_for(const RunManifest& m, int N, bool with_envelope = true) {
  CatalogOptions opt;
  opt.cfg = m.cfg;
  opt.envelope_grid = m.grid;
  opt.with_envelope = with_envelope;
  return find_branch_roots(N, opt);
}

std::string tag(int N, int p) { return "N" + std::to_string(N) + "_p" + std::to_string(p); }

}  // namespace

void RunManifest::validate() const {
  if (N.empty()) throw DomainError("manifest: N list is empty");
  for (int n : N) {
    if (n < 1) throw DomainError("manifest: N must be >= 1");
    if (p && (*p < 1 || *p > branch_count(n))) throw DomainError("manifest: p outside 1..floor(2 sqrt 2 N)");
  }
  cfg.validate();
}

void apply_config(std::istream& in, RunManifest& m) {
  std::string line;
  while (std::getline(in, line)) {
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config: expected key = value, got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "N") {
      m.N.clear();
      std::stringstream ss(val);
      for (std::string item; std::getline(ss, item, ',');) m.N.push_back(to_int(key, trim(item)));
    } else if (key == "p") {
      m.p = to_int(key, val);
    } else if (key == "e_max") {
      m.e_max = to_double(key, val);
    } else if (key == "negative") {
      if (val != "true" && val != "false") throw DomainError("config: negative must be true or false");
      m.negative = val == "true";
    } else if (key == "out") {
      m.out_dir = val;
    } else if (key == "abs_tol") {
      m.cfg.abs_tol = to_double(key, val);
    } else if (key == "rel_tol") {
      m.cfg.rel_tol = to_double(key, val);
    } else if (key == "sample_count") {
      m.cfg.sample_count = to_int(key, val);
    } else if (key == "grid") {
      m.grid = to_int(key, val);
    } else if (key == "step") {
      m.step = to_double(key, val);
    } else if (key.rfind("tol.", 0) == 0) {
      m.tolerance_overrides[key.substr(4)] = to_double(key, val);
    } else {
      throw DomainError("config: unknown key " + key);
    }
  }
}

std::vector<Reference> references(const std::string& table, int N) {
  if (table == "table1" && N == 1) {
    return {{"xi_star", 1.999901, 1e-4, false},
            {"r0", 6.621636, 1e-3, false},
            {"R_cal", 8.277124, 1e-3, false},
            {"E_star", 4.684299e-10, 1e-3, true}};
  }
  if (table == "table1" && N == 3) {
    // The printed R and E* for N = 3 repeat the N = 1 entries although b1, b2
    // scale with (N pi)^2; they are compared but do not gate the run.
    return {{"xi_star", 4.160101, 1e-3, false},
            {"r0", 6.621636, 1e-2, false},
            {"R_cal", 8.277124, 1e-3, false, false},
            {"E_star", 4.684299e-10, 1e-3, true, false}};
  }
  if (table == "table2" && N == 1) {
    return {{"E_hat[p=1]", 6.2314169e-10, 0.02, true},
            {"E_hat[p=2]", 1.582592e-9, 0.02, true},
            {"Delta2_0[p=1]", -10.10096, 0.01, true},
            {"mu0[p=1]", 0.88995, 0.02, true},
            {"mu0[p=2]", 15.328, 0.02, true}};
  }
  if (table == "r0-profile" && N == 1) {
    return {{"R0(0)", 2.0 * std::numbers::sqrt2, 1e-6, false}, {"r0", 6.621636, 1e-4, false}};
  }
  return {};
}

Comparison compare(const Reference& ref, double computed, const std::map<std::string, double>& overrides) {
  Comparison c;
  c.ref = ref;
  if (const auto it = overrides.find(ref.symbol); it != overrides.end()) c.ref.tol = it->second;
  c.computed = computed;
  c.error = std::abs(computed - ref.value);
  if (ref.relative) c.error /= std::abs(ref.value);
  c.pass = c.error <= c.ref.tol;
  return c;
}

int cmd_table1(const RunManifest& m, std::ostream& log) {
  struct Row {
    int N;
    CircularCatalog cat;
    long double E_star = 0, R_cal = 0, E_asym = 0;
  };
  std::vector<Row> rows(m.N.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    Row& r = rows[i];
    r.N = m.N[i];
    r.cat = catalog_for(m, r.N);
    r.E_star = solve_E_star(r.cat.r0, r.N);
    r.R_cal = r_m(r.E_star, r.N);
    r.E_asym = asymptotic_E_star(r.cat.r0, r.N);
  });

  bool ok = true;
  std::vector<Comparison> all;
  json jrows = json::array();
  for (const Row& r : rows) {
    std::vector<Comparison> cs;
    const std::map<std::string, double> vals{{"xi_star", r.cat.xi_star},
                                             {"r0", r.cat.r0},
                                             {"R_cal", static_cast<double>(r.R_cal)},
                                             {"E_star", static_cast<double>(r.E_star)}};
    for (const auto& ref : references("table1", r.N)) cs.push_back(compare(ref, vals.at(ref.symbol), m.tolerance_overrides));
    log << "table1 N=" << r.N << '\n';
    ok = report(log, cs) && ok;
    jrows.push_back({{"N", r.N},
                     {"xi_star", r.cat.xi_star},
                     {"r0", r.cat.r0},
                     {"xi_r0", r.cat.xi_r0},
                     {"R_cal", static_cast<double>(r.R_cal)},
                     {"E_star", static_cast<double>(r.E_star)},
                     {"E_star_asymptotic", static_cast<double>(r.E_asym)},
                     {"comparisons", comparison_json(cs)}});
    all.insert(all.end(), cs.begin(), cs.end());
  }

  json j;
  j["meta"] = {{"command", "table1"}, {"integrator", config_meta(m)}, {"envelope_grid", m.grid}};
  j["rows"] = jrows;
  open_out(m, "table1.json") << j.dump(2) << '\n';

  auto csv = open_out(m, "table1.csv");
  csv_meta(csv, m, all);
  csv << "N,xi_star,r0,R_cal,E_star,E_star_asymptotic,discrepancy_E_star\n";
  for (const Row& r : rows) {
    double disc = std::nan("");
    for (const auto& ref : references("table1", r.N)) {
      if (ref.symbol == "E_star") disc = static_cast<double>(r.E_star) / ref.value - 1.0;
    }
    csv << r.N << ',' << sci(r.cat.xi_star) << ',' << sci(r.cat.r0) << ',' << sci(static_cast<double>(r.R_cal)) << ','
        << sci(static_cast<double>(r.E_star)) << ',' << sci(static_cast<double>(r.E_asym)) << ','
        << (std::isnan(disc) ? std::string("") : sci(disc)) << '\n';
  }
  return ok ? kExitOk : kExitMismatch;
}

int cmd_table2(const RunManifest& m, std::ostream& log) {
  bool ok = true;
  for (int N : m.N) {
    if (N % 2 == 0) throw DomainError("table2: N must be odd");
    const CircularCatalog cat = catalog_for(m, N);
    struct Row {
      BoundsLedger ledger;
      StabilityReport stab;
    };
    std::vector<Row> rows(static_cast<std::size_t>(cat.nu));
    parallel_for(rows.size(), [&](std::size_t i) {
      const int p = static_cast<int>(i) + 1;
      rows[i].ledger = continuation_constants(cat, p);
      const HillContext ctx(cat, p);
      rows[i].stab = stability_report(ctx, static_cast<double>(rows[i].ledger.e_star));
    });

    std::vector<Comparison> cs;
    std::map<std::string, double> vals;
    for (const Row& r : rows) {
      const std::string s = "[p=" + std::to_string(r.ledger.p) + "]";
      vals["E_hat" + s] = static_cast<double>(r.ledger.E_hat);
      vals["Delta2_0" + s] = r.stab.Delta2_0;
      vals["mu0" + s] = r.stab.mu0.value_or(std::nan(""));
    }
    for (const auto& ref : references("table2", N)) cs.push_back(compare(ref, vals.at(ref.symbol), m.tolerance_overrides));
    log << "table2 N=" << N << '\n';
    ok = report(log, cs) && ok;

    json jrows = json::array();
    auto csv = open_out(m, "table2_N" + std::to_string(N) + ".csv");
    csv_meta(csv, m, cs);
    csv << "p,E_hat,E_hat_full_period,Delta2_0,c2,K,mu0,mu0_quadratic,classification,e_cert\n";
    for (const Row& r : rows) {
      const int p = r.ledger.p;
      const double E_hat_period = static_cast<double>(r.ledger.phi1dot_period / (2.0L * r.ledger.Psi));
      log << "  p=" << p << ": E_hat " << sci(static_cast<double>(r.ledger.E_hat)) << " (full period "
          << sci(E_hat_period) << "), Delta''(0) "
          << sci(r.stab.Delta2_0) << ", K " << sci(r.stab.K_cal) << ", mu0 " << sci(*r.stab.mu0) << ", "
          << to_string(r.stab.classification) << " on (0, " << sci(r.stab.e_cert) << ")\n";
      csv << p << ',' << sci(static_cast<double>(r.ledger.E_hat)) << ',' << sci(E_hat_period) << ','
          << sci(r.stab.Delta2_0) << ','
          << sci(r.stab.fit.c2) << ',' << sci(r.stab.K_cal) << ',' << sci(*r.stab.mu0) << ','
          << sci(r.stab.mu0_quadratic) << ',' << to_string(r.stab.classification) << ',' << sci(r.stab.e_cert) << '\n';
      auto ljson = open_out(m, "ledger_" + tag(N, p) + ".json");
      write_ledger_json(ljson, r.ledger);
      auto sjson = open_out(m, "stability_" + tag(N, p) + ".json");
      write_stability_json(sjson, r.stab);
      auto dcsv = open_out(m, "delta_" + tag(N, p) + ".csv");
      write_delta_csv(dcsv, r.stab);
      jrows.push_back({{"p", p},
                       {"E_hat", static_cast<double>(r.ledger.E_hat)},
                       {"E_hat_full_period", E_hat_period},
                       {"Delta2_0", r.stab.Delta2_0},
                       {"c2", r.stab.fit.c2},
                       {"K", r.stab.K_cal},
                       {"mu0", *r.stab.mu0},
                       {"mu0_quadratic", r.stab.mu0_quadratic},
                       {"classification", to_string(r.stab.classification)},
                       {"certified_interval", {0.0, r.stab.e_cert}}});
    }
    json j;
    j["meta"] = {{"command", "table2"}, {"N", N}, {"integrator", config_meta(m)}};
    j["rows"] = jrows;
    j["comparisons"] = comparison_json(cs);
    open_out(m, "table2_N" + std::to_string(N) + ".json") << j.dump(2) << '\n';
  }
  return ok ? kExitOk : kExitMismatch;
}

int cmd_branch(const RunManifest& m, std::ostream& log) {
  if (!m.p) throw DomainError("branch: --p is required");
  TraceOptions opt;
  opt.step = m.step;
  for (int N : m.N) {
    const CircularCatalog cat = catalog_for(m, N, false);
    const bool classify = N % 2 == 1;
    Branch br = m.negative ? trace_branch_negative(cat, *m.p, -m.e_max, opt) : trace_branch(cat, *m.p, m.e_max, opt);
    const std::string name = "branch_" + tag(N, *m.p) + (m.negative ? "_neg" : "") + ".csv";
    auto csv = open_out(m, name);
    csv_meta(csv, m, {});
    csv << "# continuation step=" << sci(m.step) << " newton_tol=" << sci(opt.newton_tol)
        << " termination=" << to_string(br.termination_reason) << '\n';
    write_branch_csv(csv, br, classify);
    const BranchPoint& last = br.points.back();
    log << "branch N=" << N << " p=" << *m.p << ": " << br.points.size() << " points, e in ["
        << sci(std::min(br.points.front().e, last.e)) << ", " << sci(std::max(br.points.front().e, last.e)) << "], "
        << to_string(br.termination_reason) << (classify ? "" : " (classification suppressed for even N)") << '\n';
  }
  return kExitOk;
}

int cmd_r0_profile(const RunManifest& m, std::ostream& log) {
  bool ok = true;
  for (int N : m.N) {
    const CircularCatalog cat = catalog_for(m, N);
    std::vector<Comparison> cs;
    const std::map<std::string, double> vals{{"R0(0)", cat.R0_profile.front().R0}, {"r0", cat.r0}};
    for (const auto& ref : references("r0-profile", N)) cs.push_back(compare(ref, vals.at(ref.symbol), m.tolerance_overrides));
    log << "r0-profile N=" << N << ": sup " << sci(cat.r0) << " at xi = " << sci(cat.xi_r0) << '\n';
    ok = report(log, cs) && ok;
    auto csv = open_out(m, "r0_profile_N" + std::to_string(N) + ".csv");
    csv_meta(csv, m, cs);
    csv << "# grid=" << m.grid << " xi_star=" << sci(cat.xi_star) << " sup=" << sci(cat.r0) << " at xi=" << sci(cat.xi_r0)
        << '\n';
    write_envelope_csv(csv, cat);
    json j;
    j["meta"] = {{"command", "r0-profile"}, {"N", N}, {"grid", m.grid}, {"integrator", config_meta(m)}};
    j["xi_star"] = cat.xi_star;
    j["r0"] = cat.r0;
    j["xi_at_max"] = cat.xi_r0;
    j["comparisons"] = comparison_json(cs);
    open_out(m, "r0_profile_N" + std::to_string(N) + ".json") << j.dump(2) << '\n';
  }
  return ok ? kExitOk : kExitMismatch;
}

int cmd_certify(const RunManifest& m, std::ostream& log) {
  if (!m.p) throw DomainError("certify: --p is required");
  bool ok = true;
  for (int N : m.N) {
    const int p = *m.p;
    const CircularCatalog cat = catalog_for(m, N);
    const BoundsLedger ledger = continuation_constants(cat, p);
    const double e_star = static_cast<double>(ledger.e_star);
    const Lemma1Certificate cert = lemma1_certify(cat, static_cast<double>(ledger.E_star));
    TraceOptions opt;
    opt.step = e_star / 8.0;
    const Branch br = trace_branch(cat, p, e_star, opt);
    const Theorem1Audit audit = verify_theorem1(br, ledger);

    json j;
    j["meta"] = {{"command", "certify"}, {"N", N}, {"p", p}, {"integrator", config_meta(m)}};
    json rows = json::array();
    for (const auto& r : cert.rows)
      rows.push_back({{"e", r.e}, {"R1", r.R1}, {"R_measured", r.R_measured}, {"xi_at_max", r.xi_at_max}});
    j["lemma1"] = {{"passed", cert.passed}, {"r0", cert.r0}, {"R_cal", cert.R_cal}, {"rows", rows}, {"failures", cert.failures}};
    j["theorem1"] = {{"passed", audit.passed},
                     {"checked", audit.checked},
                     {"min_margin", audit.min_margin},
                     {"gamma", static_cast<double>(ledger.gamma)},
                     {"e_star", e_star},
                     {"failures", audit.failures}};
    log << "certify N=" << N << " p=" << p << ": lemma1 " << (cert.passed ? "passed" : "FAILED") << ", theorem1 "
        << (audit.passed ? "passed" : "FAILED") << " (" << audit.checked << " points, margin " << sci(audit.min_margin)
        << ")";
    ok = ok && cert.passed && audit.passed;
    if (N % 2 == 1) {
      const HillContext ctx(cat, p);
      const StabilityReport stab = stability_report(ctx, e_star);
      j["stability"] = {{"Delta2_0", stab.Delta2_0},
                        {"K", stab.K_cal},
                        {"classification", to_string(stab.classification)},
                        {"certified_interval", {0.0, stab.e_cert}}};
      log << ", " << to_string(stab.classification) << " on (0, " << sci(stab.e_cert) << ")";
    }
    log << '\n';
    open_out(m, "certify_" + tag(N, p) + ".json") << j.dump(2) << '\n';
  }
  return ok ? kExitOk : kExitComputation;
}

int run(const RunManifest& m, std::ostream& log) {
  try {
    m.validate();
    if (m.command == "table1") return cmd_table1(m, log);
    if (m.command == "table2") return cmd_table2(m, log);
    if (m.command == "branch") return cmd_branch(m, log);
    if (m.command == "r0-profile") return cmd_r0_profile(m, log);
    if (m.command == "certify") return cmd_certify(m, log);
    throw DomainError("unknown command " + m.command);
  } catch (const std::exception& err) {
    log << "error: " << err.what() << '\n';
    return kExitComputation;
  }
}

}  // namespace sitnikov::cli
