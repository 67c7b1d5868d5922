#pragma once
// Inequality checkers: each turns one family of claimed relations between
// dimension estimates into a machine-readable pass/fail report over test
// measures, sampled subspaces, and (q,t) sample points.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmf/generators.hpp"
#include "mmf/grid_measure.hpp"
#include "mmf/moments.hpp"

namespace mmf {

// One compared instance. `item` names the compared quantity for diagnostics;
// v is the subspace sample index (0 when no subspace is involved). margin is
// how far the record clears its requirement (negative = fail).
struct CheckRecord {
  std::string item;
  std::uint64_t v = 0;
  double q = 0.0;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
};

struct TheoremReport {
  std::string theorem;   // behavioral id of the checked relation
  std::string region;    // sample-point provenance
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> records;
  double pass_rate = 0.0;  // fraction of passing records

  [[nodiscard]] bool all_pass() const { return pass_rate == 1.0; }
};

// Recomputes pass_rate from the records (call after assembling them).
void finalize_report(TheoremReport& report);

// b <= B <= Lambda at every grid point, slack 1e-12. A violation is recorded,
// never thrown. One record per grid point; margin = min(B-b, Lambda-B).
[[nodiscard]] TheoremReport check_ordering(const TauSurface& surface);

// B and Lambda nonincreasing along both axes within tol, and midpoint-convex
// within tol (every grid-point pair whose midpoint is also a grid point).
[[nodiscard]] TheoremReport check_shape(const TauSurface& surface,
                                        double tol = 0.02);

struct ProjectionCheckOptions {
  int m = 1;
  int v_count = 20;
  std::uint64_t seed = 0;
  double tol = 0.15;
  int j_min = 4;     // estimation window [j_min, depth] on both sides
  int workers = 1;
};

// Projects the pair across v_count Haar samples and compares projected
// against source estimates per region point. Emits five reports:
//   projected-lambda-upper  Lambda_V <= Lambda + tol   (closed regions)
//   projected-B-upper       B_V <= B + tol             (closed regions)
//   projected-b-equality    |b_V - b| <= tol           (open regions)
//   projected-b-lower       b_V >= b - tol             (GeOne region)
//   projected-ordering      b_V <= B_V <= Lambda_V, slack 1e-12 (all points)
// Regions are routed by tag; records are ordered by (v, region, point).
[[nodiscard]] std::vector<TheoremReport> check_projection(
    const GridMeasure& mu, const GridMeasure& nu,
    const std::vector<QTRegion>& regions, const ProjectionCheckOptions& opt);

// Histogram-vs-Legendre agreement: at each (q,t), the analytic gradient gives
// the exponent pair (alpha, beta); the report compares the coarse histogram
// estimate at that (alpha,beta) bin against f = alpha*q + beta*t + tau(q,t),
// requiring |f_hist - f_leg| <= tol. An empty target bin fails its record
// with a diagnostic item. bin width 0.2 (matches the exponent-lattice spacing
// at desk-scale depths; finer bins go empty), window [1, depth].
[[nodiscard]] TheoremReport check_formalism(
    const SelfSimilarSpec& spec_mu, const SelfSimilarSpec& spec_nu, int depth,
    const std::vector<std::pair<double, double>>& qt_points, double tol = 0.2,
    double bin_width = 0.2);

// Same comparison run on a projected pair (the projected estimates replace
// the analytic ones: alpha, beta, and f come from the projected surface's
// own transform, so the check is the internal consistency of the projected
// spectrum). The positive-critical-constant hypothesis this relies on is not
// checkable numerically; the report's region field says so.
[[nodiscard]] TheoremReport check_formalism_projected(
    const SelfSimilarSpec& spec_mu, const SelfSimilarSpec& spec_nu, int depth,
    const std::vector<std::pair<double, double>>& qt_points, int m,
    std::uint64_t seed, int v_count, double tol = 0.25, int workers = 1);

struct SuiteOptions {
  std::uint64_t seed = 0;
  int workers = 1;
  int multinomial_depth = 14;
  int projection_depth = 10;
  int projection_v_count = 8;
  int formalism_depth = 12;
  bool formalism_projected = true;
};

// Named suites: "multinomial", "projection", "formalism",
// "negative-controls" (every check deliberately violated, to prove the
// checkers can fail), and "all" (the first three concatenated).
[[nodiscard]] std::vector<std::string> suite_names();
[[nodiscard]] std::vector<TheoremReport> run_suite(std::string_view name,
                                                   const SuiteOptions& opt);

// JSON document: an array of report objects, each with fields exactly
// {theorem, region, tolerance, seed, records, pass_rate}, fixed field order,
// byte-identical for identical inputs. Records carry
// {item, v, q, t, lhs, rhs, margin, pass}.
[[nodiscard]] std::string reports_to_json(std::span<const TheoremReport> reports);

// Terse per-report text lines for standard output.
[[nodiscard]] std::string reports_summary(std::span<const TheoremReport> reports);

}  // namespace mmf
