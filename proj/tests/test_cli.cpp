#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "sitnikov/cli.hpp"
#include "sitnikov/errors.hpp"

using namespace sitnikov;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("config file keys") {
  cli::RunManifest m;
  std::istringstream in(
      "# comment\n"
      "N = 1, 3\n"
      "p = 2\n"
      "e_max = 0.3\n"
      "negative = true\n"
      "abs_tol = 1e-11\n"
      "tol.r0 = 0.5\n");
  cli::apply_config(in, m);
  CHECK(m.N == std::vector<int>{1, 3});
  CHECK(m.p == 2);
  CHECK(m.e_max == 0.3);
  CHECK(m.negative);
  CHECK(m.cfg.abs_tol == 1e-11);
  CHECK(m.tolerance_overrides.at("r0") == 0.5);

  std::istringstream bad("colour = blue\n");
  CHECK_THROWS_AS(cli::apply_config(bad, m), DomainError);
}

TEST_CASE("manifest validation") {
  cli::RunManifest m;
  m.N = {1};
  m.p = 3;
  CHECK_THROWS_AS(m.validate(), DomainError);
  m.p = 2;
  CHECK_NOTHROW(m.validate());
  m.N = {0};
  CHECK_THROWS_AS(m.validate(), DomainError);
}

TEST_CASE("comparison against references honours overrides") {
  const cli::Reference ref{"x", 1.0, 1e-3, false};
  CHECK(cli::compare(ref, 1.0005).pass);
  CHECK(!cli::compare(ref, 1.01).pass);
  CHECK(cli::compare(ref, 1.01, {{"x", 0.1}}).pass);
  CHECK(!cli::references("table1", 1).empty());
}

TEST_CASE("identical manifests give byte-identical reports") {
  const fs::path base = fs::temp_directory_path() / "sitnikov_cli_determinism";
  fs::remove_all(base);
  std::string first;
  for (const char* run : {"a", "b"}) {
    cli::RunManifest m;
    m.command = "r0-profile";
    m.N = {1};
    m.grid = 200;
    m.out_dir = base / run;
    fs::create_directories(m.out_dir);
    std::ostringstream log;
    CHECK(cli::run(m, log) != cli::kExitComputation);
    const std::string csv = slurp(m.out_dir / "r0_profile_N1.csv");
    const std::string json = slurp(m.out_dir / "r0_profile_N1.json");
    CHECK(!csv.empty());
    if (first.empty()) first = csv + json;
    else CHECK(first == csv + json);
  }
  fs::remove_all(base);
}

TEST_CASE("unknown command is a computational failure") {
  cli::RunManifest m;
  m.command = "nope";
  std::ostringstream log;
  CHECK(cli::run(m, log) == cli::kExitComputation);
}
