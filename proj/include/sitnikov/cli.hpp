#pragma once

// Batch driver behind the command-line tool. Each command writes its reports
// into the output directory, prints a short summary and returns an exit code.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sitnikov/dynamics.hpp"

namespace sitnikov::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 2;     // a value is outside its tolerance against the reference
inline constexpr int kExitComputation = 3;  // a module raised an error or a proven bound failed

struct RunManifest {
  std::string command;
  std::vector<int> N{1};
  std::optional<int> p;
  double e_max = 0.25;
  bool negative = false;
  std::filesystem::path out_dir = ".";
  std::map<std::string, double> tolerance_overrides;
  OrbitConfig cfg;
  int grid = 400;      // R0 profile points
  double step = 1e-3;  // continuation step

  /// Throws DomainError on N < 1 or p outside 1..floor(2 sqrt 2 N).
  void validate() const;
};

/// Reads `key = value` lines ('#' starts a comment). Recognized keys: N
/// (comma list), p, e_max, negative, out, abs_tol, rel_tol, sample_count, grid,
/// step and tol.<symbol>. Throws DomainError on unknown keys or bad values.
void apply_config(std::istream& in, RunManifest& m);

/// Reference value with its comparison tolerance.
struct Reference {
  std::string symbol;
  double value = 0.0;
  double tol = 0.0;
  bool relative = false;
  bool gating = true;  // false: reported as a discrepancy, never fails the run
};

/// Reference values for a (table, N); empty when none are known.
std::vector<Reference> references(const std::string& table, int N);

/// Outcome of comparing a computed value against a reference.
struct Comparison {
  Reference ref;
  double computed = 0.0;
  double error = 0.0;  // absolute or relative, as the reference asks
  bool pass = false;
};

Comparison compare(const Reference& ref, double computed, const std::map<std::string, double>& overrides = {});

int cmd_table1(const RunManifest& m, std::ostream& log);
int cmd_table2(const RunManifest& m, std::ostream& log);
int cmd_branch(const RunManifest& m, std::ostream& log);
int cmd_r0_profile(const RunManifest& m, std::ostream& log);
int cmd_certify(const RunManifest& m, std::ostream& log);

/// Dispatches on m.command, mapping library errors to kExitComputation.
int run(const RunManifest& m, std::ostream& log);

}  // namespace sitnikov::cli
