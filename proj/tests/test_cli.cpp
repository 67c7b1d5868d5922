// Drives the installed binary end to end through a shell, one temp dir per
// case. The binary path comes from the MMF_CLI environment variable when set
// (useful against an installed copy), otherwise from the build tree.
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "mmf/grid_measure.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_binary() {
  if (const char* env = std::getenv("MMF_CLI")) return env;
#ifdef MMF_CLI_PATH
  return MMF_CLI_PATH;
#else
  FAIL("no CLI under test: set MMF_CLI or build the tool target");
  return {};
#endif
}

std::string sh_quote(const fs::path& p) { return "'" + p.string() + "'"; }

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const testsup::TempDir& tmp, const std::string& args,
                  const std::string& env_prefix = "") {
  static int counter = 0;
  const fs::path out_path = tmp.file("stdout." + std::to_string(counter));
  const fs::path err_path = tmp.file("stderr." + std::to_string(counter));
  ++counter;
  std::string cmd = env_prefix;
  if (!cmd.empty()) cmd += ' ';
  cmd += sh_quote(cli_binary()) + " " + args + " > " + sh_quote(out_path) +
         " 2> " + sh_quote(err_path);
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  CliResult r;
  r.exit_code = WEXITSTATUS(status);
  r.out = testsup::read_file(out_path);
  r.err = testsup::read_file(err_path);
  return r;
}

// the directory announced on stdout as "run dir: <path>"
fs::path announced_run_dir(const std::string& out) {
  const std::string needle = "run dir: ";
  const auto pos = out.find(needle);
  REQUIRE(pos != std::string::npos);
  const auto end = out.find('\n', pos);
  return out.substr(pos + needle.size(), end - pos - needle.size());
}

// splits one CSV data line into doubles
std::vector<double> csv_fields(const std::string& line) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    const auto comma = line.find(',', start);
    const std::string cell = line.substr(
        start, comma == std::string::npos ? comma : comma - start);
    out.push_back(std::strtod(cell.c_str(), nullptr));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// the first data line whose leading fields equal (q, t)
std::vector<double> csv_row(const std::string& text, double q, double t) {
  std::size_t pos = text.find('\n');  // skip the header
  while (pos != std::string::npos && pos + 1 < text.size()) {
    const auto end = text.find('\n', pos + 1);
    const std::string line = text.substr(pos + 1, end - pos - 1);
    if (!line.empty()) {
      const auto fields = csv_fields(line);
      if (fields.size() >= 2 && fields[0] == q && fields[1] == t) {
        return fields;
      }
    }
    pos = end;
  }
  FAIL("no CSV row for q=" << q << " t=" << t);
  return {};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("version and usage errors") {
  testsup::TempDir tmp;
  const auto version = run_cli(tmp, "--version");
  CHECK(version.exit_code == 0);
  CHECK(version.out.find("mmf 1.0.0") != std::string::npos);

  CHECK(run_cli(tmp, "").exit_code == 2);
  CHECK(run_cli(tmp, "--bogus").exit_code == 2);
  CHECK(run_cli(tmp, "gen --preset no-such-family").exit_code == 2);
  CHECK(run_cli(tmp, "verify --suite no-such-suite").exit_code == 2);
}

TEST_CASE("gen hashes identical options to the same run directory") {
  testsup::TempDir tmp;
  const std::string args = "gen --preset binomial-pair --depth 6 --runs-dir " +
                           sh_quote(tmp.path() / "runs");
  const auto first = run_cli(tmp, args);
  REQUIRE(first.exit_code == 0);
  const fs::path dir = announced_run_dir(first.out);
  CHECK(fs::exists(dir / "run.cfg"));
  CHECK(fs::exists(dir / "mu.mmf"));
  CHECK(fs::exists(dir / "nu.mmf"));
  const std::string cfg = testsup::read_file(dir / "run.cfg");
  CHECK(cfg.find("cmd=gen\n") != std::string::npos);
  CHECK(cfg.find("depth=6\n") != std::string::npos);
  const std::string mu_bytes = testsup::read_file(dir / "mu.mmf");

  const auto second = run_cli(tmp, args);
  REQUIRE(second.exit_code == 0);
  CHECK(announced_run_dir(second.out) == dir);
  CHECK(testsup::read_file(dir / "mu.mmf") == mu_bytes);
}

TEST_CASE("gen then tau reproduces the closed-form surface") {
  testsup::TempDir tmp;
  const fs::path pair_dir = tmp.path() / "pair";
  REQUIRE(run_cli(tmp, "gen --preset binomial-pair --depth 8 --out-dir " +
                           sh_quote(pair_dir))
              .exit_code == 0);

  const fs::path csv = tmp.file("tau.csv");
  const auto tau = run_cli(
      tmp, "tau " + sh_quote(pair_dir / "mu.mmf") + " " +
               sh_quote(pair_dir / "nu.mmf") +
               " --q 0:1:1 --t 0:1:1 --window 1:0 --out " + sh_quote(csv));
  REQUIRE(tau.exit_code == 0);
  CHECK(tau.out.find("tau surface:") != std::string::npos);

  const std::string text = testsup::read_file(csv);
  CHECK(text.rfind("q,t,b,B,Lambda,r2\n", 0) == 0);
  const auto row10 = csv_row(text, 1.0, 0.0);
  REQUIRE(row10.size() == 6);
  CHECK(std::abs(row10[3]) <= 1e-9);  // B(1,0) = 0 for probability measures
  const auto row00 = csv_row(text, 0.0, 0.0);
  CHECK(row00[3] == doctest::Approx(1.0).epsilon(1e-9));  // box dimension
  const auto row11 = csv_row(text, 1.0, 1.0);
  CHECK(row11[3] == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("spectrum writes both spectra and the optional ratio selection") {
  testsup::TempDir tmp;
  const fs::path pair_dir = tmp.path() / "pair";
  REQUIRE(run_cli(tmp, "gen --preset binomial-pair --depth 8 --out-dir " +
                           sh_quote(pair_dir))
              .exit_code == 0);

  const fs::path out_dir = tmp.path() / "spec";
  const auto r = run_cli(
      tmp, "spectrum " + sh_quote(pair_dir / "mu.mmf") + " " +
               sh_quote(pair_dir / "nu.mmf") +
               " --q -1:1:0.5 --t -1:1:0.5 --window 1:0 --gamma 1.0 "
               "--out-dir " +
               sh_quote(out_dir));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("legendre:") != std::string::npos);
  CHECK(r.out.find("ratio-set gamma=1") != std::string::npos);

  const std::string leg = testsup::read_file(out_dir / "legendre.csv");
  CHECK(leg.rfind("alpha,beta,f_legendre\n", 0) == 0);
  const std::string hist = testsup::read_file(out_dir / "histogram.csv");
  CHECK(hist.rfind("alpha_bin,beta_bin,count,f_hist\n", 0) == 0);
}

TEST_CASE("project writes an indexed family of projected pairs") {
  testsup::TempDir tmp;
  const fs::path pair_dir = tmp.path() / "pair";
  REQUIRE(run_cli(tmp, "gen --preset product-binomial --depth 5 --out-dir " +
                           sh_quote(pair_dir))
              .exit_code == 0);

  const fs::path out_dir = tmp.path() / "proj";
  const auto r = run_cli(tmp, "project " + sh_quote(pair_dir / "mu.mmf") + " " +
                                  sh_quote(pair_dir / "nu.mmf") +
                                  " --m 1 --count 3 --seed 2 --out-dir " +
                                  sh_quote(out_dir));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("projected 3 sample(s)") != std::string::npos);

  const std::string index = testsup::read_file(out_dir / "index.txt");
  CHECK(index.rfind("0 subspace_0.txt mu_0.mmf nu_0.mmf\n", 0) == 0);
  for (int k = 0; k < 3; ++k) {
    const std::string suffix = std::to_string(k);
    CHECK(fs::exists(out_dir / ("subspace_" + suffix + ".txt")));
    const auto mu_v =
        mmf::load_measure(out_dir / ("mu_" + suffix + ".mmf"));
    CHECK(mu_v.dim() == 1);
    CHECK(mu_v.depth() == 5);
    CHECK(mu_v.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("oracle writes the closed-form surface") {
  testsup::TempDir tmp;
  const fs::path csv = tmp.file("oracle.csv");
  const auto r =
      run_cli(tmp, "oracle --q 0:1:1 --t 0:1:1 --out " + sh_quote(csv));
  REQUIRE(r.exit_code == 0);
  const std::string text = testsup::read_file(csv);
  CHECK(text.rfind("q,t,beta_analytic\n", 0) == 0);
  CHECK(text.find("1,1,-1\n") != std::string::npos);
}

TEST_CASE("verify exit codes distinguish pass from failed checks") {
  testsup::TempDir tmp;
  const fs::path good_report = tmp.file("good.json");
  const auto good = run_cli(
      tmp, "verify --suite multinomial --multinomial-depth 6 --report " +
               sh_quote(good_report));
  CHECK(good.exit_code == 0);
  CHECK(good.out.find("estimate-ordering") != std::string::npos);
  const std::string good_json = testsup::read_file(good_report);
  CHECK(good_json.rfind("[\n", 0) == 0);

  const fs::path bad_report = tmp.file("bad.json");
  const auto bad = run_cli(
      tmp, "verify --suite negative-controls --report " + sh_quote(bad_report));
  CHECK(bad.exit_code == 3);
  CHECK(fs::exists(bad_report));
}

TEST_CASE("seed comes from the environment unless the flag wins") {
  testsup::TempDir tmp;
  const fs::path pair_dir = tmp.path() / "pair";
  REQUIRE(run_cli(tmp, "gen --preset product-binomial --depth 5 --out-dir " +
                           sh_quote(pair_dir))
              .exit_code == 0);
  const std::string measures =
      sh_quote(pair_dir / "mu.mmf") + " " + sh_quote(pair_dir / "nu.mmf");

  const fs::path env_dir = tmp.path() / "by-env";
  REQUIRE(run_cli(tmp,
                  "project " + measures + " --count 1 --out-dir " +
                      sh_quote(env_dir),
                  "MMF_SEED=9")
              .exit_code == 0);
  CHECK(testsup::read_file(env_dir / "run.cfg").find("seed=9\n") !=
        std::string::npos);

  const fs::path flag_dir = tmp.path() / "by-flag";
  REQUIRE(run_cli(tmp,
                  "project " + measures + " --count 1 --seed 4 --out-dir " +
                      sh_quote(flag_dir),
                  "MMF_SEED=9")
              .exit_code == 0);
  CHECK(testsup::read_file(flag_dir / "run.cfg").find("seed=4\n") !=
        std::string::npos);
}

TEST_CASE("operational failures report an error and exit 1") {
  testsup::TempDir tmp;
  const auto r = run_cli(tmp, "tau " + sh_quote(tmp.path() / "absent.mmf") +
                                  " " + sh_quote(tmp.path() / "absent.mmf") +
                                  " --out " + sh_quote(tmp.file("t.csv")));
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
}

}  // TEST_SUITE
