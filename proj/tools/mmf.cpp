// mmf: measure-pair generation, dimension surfaces, spectra, subspace
// projection, analytic oracles, and the verification suites, glued into
// reproducible runs. Every command accepts --config FILE (flat key=value,
// command-line flags win) and drops its artifacts into a run directory named
// by the hash of its effective semantic options.

#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmf/generators.hpp"
#include "mmf/grid_measure.hpp"
#include "mmf/moments.hpp"
#include "mmf/oracle.hpp"
#include "mmf/projection.hpp"
#include "mmf/spectra.hpp"
#include "mmf/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCheckFailed = 3;

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Canonical rendering of one run's semantic options; its FNV-1a hash names
// the run directory, so identical configuration always lands in the same
// place. Execution knobs (--workers, --out-dir, --runs-dir, --report) stay
// out on purpose: they do not change artifact bytes.
class RunConfig {
 public:
  explicit RunConfig(std::string_view command) { add("cmd", command); }

  void add(std::string_view key, std::string_view value) {
    text_ += key;
    text_ += '=';
    text_ += value;
    text_ += '\n';
  }
  void add(std::string_view key, const std::string& value) {
    add(key, std::string_view(value));
  }
  void add(std::string_view key, std::int64_t value) {
    add(key, std::to_string(value));
  }
  void add(std::string_view key, std::uint64_t value) {
    add(key, std::to_string(value));
  }
  void add(std::string_view key, int value) {
    add(key, static_cast<std::int64_t>(value));
  }
  void add(std::string_view key, bool value) {
    add(key, std::string_view(value ? "true" : "false"));
  }
  void add(std::string_view key, double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    add(key, std::string_view(buf));
  }
  void add(std::string_view key, const std::vector<double>& values) {
    std::string joined;
    char buf[40];
    for (double v : values) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      if (!joined.empty()) joined += ',';
      joined += buf;
    }
    add(key, joined);
  }

  [[nodiscard]] const std::string& text() const { return text_; }

 private:
  std::string text_;
};

// out_dir overrides the hashed location; either way the directory exists on
// return and the resolved path is announced once.
fs::path resolve_run_dir(const RunConfig& config, const std::string& runs_dir,
                         const std::string& out_dir) {
  fs::path dir;
  if (!out_dir.empty()) {
    dir = out_dir;
  } else {
    char name[24];
    std::snprintf(name, sizeof name, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config.text())));
    dir = fs::path(runs_dir) / name;
  }
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << config.text();
  std::cout << "run dir: " << dir.string() << "\n";
  return dir;
}

std::pair<int, int> parse_window(const std::string& text, int depth) {
  int lo = 0, hi = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%d:%d%c", &lo, &hi, &extra) != 2) {
    throw std::invalid_argument("window must be jmin:jmax, got '" + text + "'");
  }
  if (hi == 0) hi = depth;
  return {lo, hi};
}

void print_measure_summary(const char* label, const mmf::GridMeasure& m,
                           const fs::path& path) {
  std::printf("%s: %s  base %d  dim %d  depth %d  %zu cells  mass %.12g\n",
              label, path.string().c_str(), m.base(), m.dim(), m.depth(),
              m.cell_count(), m.total_mass());
}

// ---- command options ---------------------------------------------------------

struct CommonOpts {
  std::string runs_dir = "runs";
  std::string out_dir;
  int workers = 0;  // 0 = machine parallelism
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->set_config("--config", "",
                  "flat key=value config file; command-line flags win");
  cmd->add_option("--runs-dir", o.runs_dir,
                  "root for hashed run directories")
      ->capture_default_str();
  cmd->add_option("--out-dir", o.out_dir,
                  "write artifacts here instead of a hashed run directory");
  cmd->add_option("--workers", o.workers,
                  "worker threads (0 = machine parallelism; results are "
                  "worker-count independent)")
      ->capture_default_str();
}

struct GenOpts {
  CommonOpts common;
  std::string preset;
  std::vector<double> p;
  std::vector<double> w;
  int depth = 12;
};

struct TauOpts {
  CommonOpts common;
  std::string mu_file;
  std::string nu_file;
  std::string q_range = "-2:2:0.5";
  std::string t_range = "-2:2:0.5";
  std::string window = "4:0";
  std::string out;
};

struct SpectrumOpts {
  CommonOpts common;
  std::string mu_file;
  std::string nu_file;
  std::string q_range = "-1:1:0.1";
  std::string t_range = "-1:1:0.1";
  std::string window = "1:0";
  double bin_width = 0.2;
  double gamma = 0.0;
  double gamma_tol = 0.05;
  bool gamma_set = false;
};

struct ProjectOpts {
  CommonOpts common;
  std::string mu_file;
  std::string nu_file;
  int m = 1;
  int count = 20;
  std::uint64_t seed = 0;
  int base = 0;   // 0 = same as source
  int depth = 0;  // 0 = same as source
};

struct OracleOpts {
  CommonOpts common;
  std::string preset = "binomial-pair";
  std::vector<double> p;
  std::vector<double> w;
  std::string q_range = "-2:2:0.5";
  std::string t_range = "-2:2:0.5";
  std::string out;
};

struct VerifyOpts {
  CommonOpts common;
  std::string suite = "all";
  std::uint64_t seed = 0;
  std::string report;
  int multinomial_depth = 14;
  int projection_depth = 10;
  int projection_samples = 8;
  int formalism_depth = 12;
  bool projected_formalism = true;
};

// ---- command handlers ----------------------------------------------------------

int cmd_gen(const GenOpts& o) {
  const mmf::SelfSimilarSpec spec = mmf::preset_spec(o.preset, o.p, o.w);
  const mmf::MeasurePair pair = mmf::preset_pair(spec, o.depth);

  RunConfig cfg("gen");
  cfg.add("preset", o.preset);
  cfg.add("p", spec.p);
  cfg.add("w", spec.w);
  cfg.add("depth", o.depth);
  const fs::path dir = resolve_run_dir(cfg, o.common.runs_dir, o.common.out_dir);

  const fs::path mu_path = dir / "mu.mmf";
  const fs::path nu_path = dir / "nu.mmf";
  mmf::save_measure(pair.mu, mu_path);
  mmf::save_measure(pair.nu, nu_path);
  print_measure_summary("mu", pair.mu, mu_path);
  print_measure_summary("nu", pair.nu, nu_path);
  return kExitOk;
}

int cmd_tau(const TauOpts& o) {
  const mmf::GridMeasure mu = mmf::load_measure(o.mu_file);
  const mmf::GridMeasure nu = mmf::load_measure(o.nu_file);
  const std::vector<double> q_grid = mmf::parse_range(o.q_range);
  const std::vector<double> t_grid = mmf::parse_range(o.t_range);
  const auto [j_min, j_max] = parse_window(o.window, mu.depth());

  const mmf::TauSurface surface = mmf::tau_surface(
      mu, nu, q_grid, t_grid, j_min, j_max, o.common.workers);

  fs::path out;
  if (!o.out.empty()) {
    out = o.out;
  } else {
    RunConfig cfg("tau");
    cfg.add("mu", o.mu_file);
    cfg.add("nu", o.nu_file);
    cfg.add("q", o.q_range);
    cfg.add("t", o.t_range);
    cfg.add("window", o.window);
    out = resolve_run_dir(cfg, o.common.runs_dir, o.common.out_dir) / "tau.csv";
  }
  mmf::save_tau_csv(surface, out);
  std::printf("tau surface: %s  %zu points  window %d:%d\n",
              out.string().c_str(), surface.point_count(), j_min, j_max);
  return kExitOk;
}

int cmd_spectrum(const SpectrumOpts& o) {
  const mmf::GridMeasure mu = mmf::load_measure(o.mu_file);
  const mmf::GridMeasure nu = mmf::load_measure(o.nu_file);
  const std::vector<double> q_grid = mmf::parse_range(o.q_range);
  const std::vector<double> t_grid = mmf::parse_range(o.t_range);
  const auto [j_min, j_max] = parse_window(o.window, mu.depth());

  RunConfig cfg("spectrum");
  cfg.add("mu", o.mu_file);
  cfg.add("nu", o.nu_file);
  cfg.add("q", o.q_range);
  cfg.add("t", o.t_range);
  cfg.add("window", o.window);
  cfg.add("bin-width", o.bin_width);
  if (o.gamma_set) {
    cfg.add("gamma", o.gamma);
    cfg.add("gamma-tol", o.gamma_tol);
  }
  const fs::path dir = resolve_run_dir(cfg, o.common.runs_dir, o.common.out_dir);

  const mmf::TauSurface surface = mmf::tau_surface(
      mu, nu, q_grid, t_grid, j_min, j_max, o.common.workers);
  const std::vector<mmf::LegendrePoint> points = mmf::legendre(surface);
  mmf::save_legendre_csv(points, dir / "legendre.csv");

  const mmf::ExponentField field = mmf::pointwise_exponents(mu, nu, j_min, j_max);
  const mmf::HistogramSpectrum hist =
      mmf::histogram_spectrum(field, o.bin_width, j_max);
  mmf::save_histogram_csv(hist, dir / "histogram.csv");

  std::printf("legendre: %zu points  histogram: %zu bins (width %g, level %d)\n",
              points.size(), hist.bins.size(), o.bin_width, j_max);
  if (o.gamma_set) {
    const mmf::RatioSelection sel =
        mmf::ratio_set(field, o.gamma, o.gamma_tol, j_max);
    std::printf("ratio-set gamma=%.12g tol=%.12g count=%llu dim=%.12g\n",
                o.gamma, o.gamma_tol,
                static_cast<unsigned long long>(sel.count), sel.dim_est);
  }
  return kExitOk;
}

int cmd_project(const ProjectOpts& o) {
  const mmf::GridMeasure mu = mmf::load_measure(o.mu_file);
  const mmf::GridMeasure nu = mmf::load_measure(o.nu_file);
  const int base = o.base > 0 ? o.base : mu.base();
  const int depth = o.depth > 0 ? o.depth : mu.depth();

  RunConfig cfg("project");
  cfg.add("mu", o.mu_file);
  cfg.add("nu", o.nu_file);
  cfg.add("m", o.m);
  cfg.add("count", o.count);
  cfg.add("seed", o.seed);
  cfg.add("base", base);
  cfg.add("depth", depth);
  const fs::path dir = resolve_run_dir(cfg, o.common.runs_dir, o.common.out_dir);

  std::ofstream index(dir / "index.txt");
  for (int k = 0; k < o.count; ++k) {
    const mmf::Subspace V =
        mmf::sample_grassmann(mu.dim(), o.m, o.seed,
                              static_cast<std::uint64_t>(k));
    const auto [mu_v, nu_v] = mmf::project_pair(mu, nu, V, base, depth);
    const std::string sub_name = "subspace_" + std::to_string(k) + ".txt";
    const std::string mu_name = "mu_" + std::to_string(k) + ".mmf";
    const std::string nu_name = "nu_" + std::to_string(k) + ".mmf";
    mmf::save_subspace(V, dir / sub_name);
    mmf::save_measure(mu_v, dir / mu_name);
    mmf::save_measure(nu_v, dir / nu_name);
    index << k << ' ' << sub_name << ' ' << mu_name << ' ' << nu_name << '\n';
  }
  if (!index) {
    throw std::runtime_error("write failed: " + (dir / "index.txt").string());
  }
  std::printf("projected %d sample(s) to rank %d, base %d depth %d\n", o.count,
              o.m, base, depth);
  return kExitOk;
}

int cmd_oracle(const OracleOpts& o) {
  const mmf::SelfSimilarSpec spec = mmf::preset_spec(o.preset, o.p, o.w);
  const std::vector<double> q_grid = mmf::parse_range(o.q_range);
  const std::vector<double> t_grid = mmf::parse_range(o.t_range);

  fs::path out;
  if (!o.out.empty()) {
    out = o.out;
  } else {
    RunConfig cfg("oracle");
    cfg.add("preset", o.preset);
    cfg.add("p", spec.p);
    cfg.add("w", spec.w);
    cfg.add("q", o.q_range);
    cfg.add("t", o.t_range);
    out = resolve_run_dir(cfg, o.common.runs_dir, o.common.out_dir) /
          "oracle.csv";
  }
  mmf::save_oracle_csv(spec, spec, q_grid, t_grid, out);
  std::printf("oracle surface: %s  %zu points\n", out.string().c_str(),
              q_grid.size() * t_grid.size());
  return kExitOk;
}

int cmd_verify(const VerifyOpts& o) {
  mmf::SuiteOptions so;
  so.seed = o.seed;
  so.workers = o.common.workers;
  so.multinomial_depth = o.multinomial_depth;
  so.projection_depth = o.projection_depth;
  so.projection_v_count = o.projection_samples;
  so.formalism_depth = o.formalism_depth;
  so.formalism_projected = o.projected_formalism;

  const std::vector<mmf::TheoremReport> reports = mmf::run_suite(o.suite, so);

  fs::path out;
  if (!o.report.empty()) {
    out = o.report;
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
  } else {
    RunConfig cfg("verify");
    cfg.add("suite", o.suite);
    cfg.add("seed", o.seed);
    cfg.add("multinomial-depth", o.multinomial_depth);
    cfg.add("projection-depth", o.projection_depth);
    cfg.add("projection-samples", o.projection_samples);
    cfg.add("formalism-depth", o.formalism_depth);
    cfg.add("projected-formalism", o.projected_formalism);
    out = resolve_run_dir(cfg, o.common.runs_dir, o.common.out_dir) /
          "report.json";
  }
  std::ofstream os(out);
  os << mmf::reports_to_json(reports);
  if (!os.flush()) {
    throw std::runtime_error("write failed: " + out.string());
  }
  std::fputs(mmf::reports_summary(reports).c_str(), stdout);
  std::printf("report: %s\n", out.string().c_str());

  for (const mmf::TheoremReport& rep : reports) {
    if (!rep.all_pass()) return kExitCheckFailed;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mutual multifractal analysis toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mmf 1.0.0");

  GenOpts gen;
  CLI::App* cmd_gen_app = app.add_subcommand(
      "gen", "generate a measure pair from a named preset");
  add_common(cmd_gen_app, gen.common);
  cmd_gen_app->add_option("--preset", gen.preset, "pair family name")
      ->required()
      ->check(CLI::IsMember(mmf::preset_names()));
  cmd_gen_app->add_option("--p", gen.p, "first-measure branch probabilities")
      ->delimiter(',');
  cmd_gen_app->add_option("--w", gen.w, "second-measure branch probabilities")
      ->delimiter(',');
  cmd_gen_app->add_option("--depth", gen.depth, "grid depth")
      ->capture_default_str();

  TauOpts tau;
  CLI::App* cmd_tau_app = app.add_subcommand(
      "tau", "estimate the dimension surface of a measure pair");
  add_common(cmd_tau_app, tau.common);
  cmd_tau_app->add_option("mu", tau.mu_file, "first measure file")->required();
  cmd_tau_app->add_option("nu", tau.nu_file, "second measure file")->required();
  cmd_tau_app->add_option("--q", tau.q_range, "q grid lo:hi:step")
      ->capture_default_str();
  cmd_tau_app->add_option("--t", tau.t_range, "t grid lo:hi:step")
      ->capture_default_str();
  cmd_tau_app
      ->add_option("--window", tau.window,
                   "estimation window jmin:jmax (jmax 0 = measure depth)")
      ->capture_default_str();
  cmd_tau_app->add_option("--out", tau.out, "explicit output CSV path");

  SpectrumOpts spectrum;
  CLI::App* cmd_spectrum_app = app.add_subcommand(
      "spectrum", "Legendre and histogram spectra of a measure pair");
  add_common(cmd_spectrum_app, spectrum.common);
  cmd_spectrum_app->add_option("mu", spectrum.mu_file, "first measure file")
      ->required();
  cmd_spectrum_app->add_option("nu", spectrum.nu_file, "second measure file")
      ->required();
  cmd_spectrum_app->add_option("--q", spectrum.q_range, "q grid lo:hi:step")
      ->capture_default_str();
  cmd_spectrum_app->add_option("--t", spectrum.t_range, "t grid lo:hi:step")
      ->capture_default_str();
  cmd_spectrum_app
      ->add_option("--window", spectrum.window,
                   "estimation window jmin:jmax (jmax 0 = measure depth)")
      ->capture_default_str();
  cmd_spectrum_app
      ->add_option("--bin-width", spectrum.bin_width,
                   "histogram bin width on both exponent axes")
      ->capture_default_str();
  cmd_spectrum_app->add_option(
      "--gamma", spectrum.gamma,
      "also report the exponent-ratio selection at this target");
  cmd_spectrum_app->add_option("--gamma-tol", spectrum.gamma_tol,
                               "ratio-selection tolerance")
      ->capture_default_str();

  ProjectOpts project;
  CLI::App* cmd_project_app = app.add_subcommand(
      "project", "project a measure pair onto sampled subspaces");
  add_common(cmd_project_app, project.common);
  cmd_project_app->add_option("mu", project.mu_file, "first measure file")
      ->required();
  cmd_project_app->add_option("nu", project.nu_file, "second measure file")
      ->required();
  cmd_project_app->add_option("--m", project.m, "subspace rank")
      ->capture_default_str();
  cmd_project_app->add_option("--count", project.count, "number of samples")
      ->capture_default_str();
  cmd_project_app->add_option("--seed", project.seed, "sampler seed")
      ->envname("MMF_SEED")
      ->capture_default_str();
  cmd_project_app->add_option("--base", project.base,
                              "projected grid base (0 = source base)");
  cmd_project_app->add_option("--depth", project.depth,
                              "projected grid depth (0 = source depth)");

  OracleOpts oracle;
  CLI::App* cmd_oracle_app = app.add_subcommand(
      "oracle", "closed-form dimension surface of a self-similar pair");
  add_common(cmd_oracle_app, oracle.common);
  cmd_oracle_app->add_option("--preset", oracle.preset, "pair family name")
      ->capture_default_str()
      ->check(CLI::IsMember(mmf::preset_names()));
  cmd_oracle_app
      ->add_option("--p", oracle.p, "first-measure branch probabilities")
      ->delimiter(',');
  cmd_oracle_app
      ->add_option("--w", oracle.w, "second-measure branch probabilities")
      ->delimiter(',');
  cmd_oracle_app->add_option("--q", oracle.q_range, "q grid lo:hi:step")
      ->capture_default_str();
  cmd_oracle_app->add_option("--t", oracle.t_range, "t grid lo:hi:step")
      ->capture_default_str();
  cmd_oracle_app->add_option("--out", oracle.out, "explicit output CSV path");

  VerifyOpts verify;
  CLI::App* cmd_verify_app = app.add_subcommand(
      "verify", "run a named verification suite and write a JSON report");
  add_common(cmd_verify_app, verify.common);
  cmd_verify_app->add_option("--suite", verify.suite, "suite name")
      ->capture_default_str()
      ->check(CLI::IsMember(mmf::suite_names()));
  cmd_verify_app->add_option("--seed", verify.seed, "subspace sampler seed")
      ->envname("MMF_SEED")
      ->capture_default_str();
  cmd_verify_app->add_option("--report", verify.report,
                             "explicit report path (bypasses the run dir)");
  cmd_verify_app
      ->add_option("--multinomial-depth", verify.multinomial_depth,
                   "depth of the exactness suite's pair")
      ->capture_default_str();
  cmd_verify_app
      ->add_option("--projection-depth", verify.projection_depth,
                   "depth of the projection suite's pair")
      ->capture_default_str();
  cmd_verify_app
      ->add_option("--projection-samples", verify.projection_samples,
                   "subspace samples in the projection suite")
      ->capture_default_str();
  cmd_verify_app
      ->add_option("--formalism-depth", verify.formalism_depth,
                   "depth of the formalism suite's pairs")
      ->capture_default_str();
  cmd_verify_app->add_flag("!--no-projected-formalism",
                           verify.projected_formalism,
                           "skip the projected-pair formalism check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  spectrum.gamma_set = cmd_spectrum_app->count("--gamma") > 0;

  try {
    if (*cmd_gen_app) return cmd_gen(gen);
    if (*cmd_tau_app) return cmd_tau(tau);
    if (*cmd_spectrum_app) return cmd_spectrum(spectrum);
    if (*cmd_project_app) return cmd_project(project);
    if (*cmd_oracle_app) return cmd_oracle(oracle);
    if (*cmd_verify_app) return cmd_verify(verify);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitUsage;
}
