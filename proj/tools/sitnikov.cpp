#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sitnikov/cli.hpp"

namespace {

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using sitnikov::cli::RunManifest;
  CLI::App app{"Even subharmonics of the Sitnikov problem: bounds, continuation and stability"};
  app.require_subcommand(1);

  std::string config, n_list, out_dir;
  std::optional<int> p;
  std::optional<double> e_max, abs_tol, rel_tol, step;
  std::optional<int> grid;
  bool negative = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--N", n_list, "comma-separated list of N");
    sub->add_option("--config", config, "key = value file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--abs-tol", abs_tol, "integrator absolute tolerance");
    sub->add_option("--rel-tol", rel_tol, "integrator relative tolerance");
  };
  auto* t1 = app.add_subcommand("table1", "xi*, r0, R, E* per N");
  auto* t2 = app.add_subcommand("table2", "per-branch E^, Delta''(0), K, mu0 and classification (odd N)");
  auto* br = app.add_subcommand("branch", "continue branch p in e");
  auto* r0 = app.add_subcommand("r0-profile", "R0(xi) on [0, xi*] and its supremum");
  auto* ce = app.add_subcommand("certify", "bound certification, amplitude audit and classification for one branch");
  for (auto* sub : {t1, t2, br, r0, ce}) add_common(sub);
  for (auto* sub : {br, ce}) sub->add_option("--p", p, "branch index");
  br->add_option("--e-max", e_max, "largest |e| to reach");
  br->add_option("--step", step, "continuation step in e");
  br->add_flag("--negative", negative, "continue toward negative e (odd N)");
  for (auto* sub : {t1, r0, ce, t2}) sub->add_option("--grid", grid, "R0 profile points (>= 200)");

  CLI11_PARSE(app, argc, argv);

  RunManifest m;
  m.command = app.get_subcommands().front()->get_name();
  try {
    if (!config.empty()) {
      std::ifstream in(config);
      sitnikov::cli::apply_config(in, m);
    }
    if (!n_list.empty()) m.N = parse_list(n_list);
    if (p) m.p = p;
    if (e_max) m.e_max = *e_max;
    if (step) m.step = *step;
    if (grid) m.grid = *grid;
    if (abs_tol) m.cfg.abs_tol = *abs_tol;
    if (rel_tol) m.cfg.rel_tol = *rel_tol;
    if (negative) m.negative = true;
    if (!out_dir.empty()) m.out_dir = out_dir;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return sitnikov::cli::kExitComputation;
  }
  return sitnikov::cli::run(m, std::cout);
}
