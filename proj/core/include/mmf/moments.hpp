#pragma once
// Two-parameter moment sums across scales and the three dimension-function
// estimates derived from their scaling rates.

#include <cstddef>
#include <filesystem>
#include <string_view>
#include <utility>
#include <vector>

#include "mmf/grid_measure.hpp"

namespace mmf {

// log S_j(q,t) per level j, where S_j sums mu(Q)^q nu(Q)^t over the cells at
// depth j charged by BOTH measures. Cells charged by only one measure are
// excluded (all dimension functions live on the joint support).
struct ScaleTable {
  double q = 0.0;
  double t = 0.0;
  int base = 0;
  std::vector<int> levels;      // strictly increasing
  std::vector<double> log_sums; // finite
};

struct DimEstimates {
  double b = 0.0;       // min consecutive-scale increment
  double B = 0.0;       // OLS slope of log S_j against j*log(base)
  double Lambda = 0.0;  // max consecutive-scale increment
  double r2 = 0.0;
};

// Dimension estimates over a (q,t) grid, row-major with q as the outer index.
struct TauSurface {
  std::vector<double> q_grid;   // ascending
  std::vector<double> t_grid;   // ascending
  std::vector<double> b_est;
  std::vector<double> B_est;
  std::vector<double> Lambda_est;
  std::vector<double> r2;
  int j_min = 0;
  int j_max = 0;

  [[nodiscard]] std::size_t index(std::size_t qi, std::size_t ti) const {
    return qi * t_grid.size() + ti;
  }
  [[nodiscard]] std::size_t point_count() const {
    return q_grid.size() * t_grid.size();
  }
};

// Parameter regions in the (q,t) plane used by the theorem checkers. Closed
// tags include their boundary; Open* tags are the strict-inequality variants.
enum class RegionTag {
  NegNeg,       // q <= 0, t <= 0
  NegUnit,      // q <= 0, 0 <= t <= 1
  UnitNeg,      // 0 <= q <= 1, t <= 0
  GeOne,        // q >= 1, t >= 1
  OpenNegNeg,   // q < 0, t < 0
  OpenNegUnit,  // q < 0, 0 < t < 1
  OpenUnitNeg   // 0 < q < 1, t < 0
};

struct QTRegion {
  RegionTag tag;
  std::vector<std::pair<double, double>> points;
};

[[nodiscard]] bool region_contains(RegionTag tag, double q, double t);
[[nodiscard]] std::string_view region_name(RegionTag tag);

// Ships the default sample points per tag; every point satisfies the tag's
// membership predicate (asserted in the constructor path).
[[nodiscard]] QTRegion default_region(RegionTag tag);

// log S_j(q,t) by coarsening both measures to depth j, intersecting supports,
// and a fixed-order log-sum-exp. Throws std::invalid_argument when the grids
// differ, j is out of range, or the joint support at depth j is empty.
[[nodiscard]] double moment_sum(const GridMeasure& mu, const GridMeasure& nu,
                                double q, double t, int j);

// moment_sum for every level of [j_min, j_max]; requires
// 1 <= j_min < j_max <= depth.
[[nodiscard]] ScaleTable build_scale_table(const GridMeasure& mu,
                                           const GridMeasure& nu, double q,
                                           double t, int j_min, int j_max);

// Scaling rates of a table with >= 3 levels. With d_j the per-level increment
// (log S_{j+1} - log S_j)/log(base): Lambda = max d_j, b = min d_j, B = OLS
// slope of log S_j against j*log(base). The OLS slope is a convex combination
// of chord slopes, hence lies between min and max increment up to rounding;
// B is clamped into [b, Lambda] so the ordering is literal.
[[nodiscard]] DimEstimates estimate_dims(const ScaleTable& table);

// estimate_dims per grid point. Grid points are evaluated in parallel when
// workers > 1 (0 = machine parallelism); every point reduces its cells in a
// fixed sequential order, so results are bitwise independent of worker count.
[[nodiscard]] TauSurface tau_surface(const GridMeasure& mu,
                                     const GridMeasure& nu,
                                     std::vector<double> q_grid,
                                     std::vector<double> t_grid, int j_min,
                                     int j_max, int workers = 1);

// estimate_dims at an arbitrary point list over one shared coarsening pass
// (the checkers probe scattered points, not grids). Same determinism contract
// as tau_surface.
[[nodiscard]] std::vector<DimEstimates> estimate_dims_at(
    const GridMeasure& mu, const GridMeasure& nu,
    const std::vector<std::pair<double, double>>& points, int j_min, int j_max,
    int workers = 1);

// CSV export: header q,t,b,B,Lambda,r2; rows in row-major (q outer) order;
// 12 significant digits.
void save_tau_csv(const TauSurface& surface, const std::filesystem::path& path);

// `lo:hi:step` -> ascending grid (inclusive endpoints within half a step).
[[nodiscard]] std::vector<double> parse_range(std::string_view text);

}  // namespace mmf
