#include "mmf/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mmf/numeric.hpp"
#include "mmf/parallel.hpp"

namespace mmf {

namespace {

void check_common_grid(const GridMeasure& mu, const GridMeasure& nu) {
  if (mu.base() != nu.base() || mu.dim() != nu.dim() ||
      mu.depth() != nu.depth()) {
    throw std::invalid_argument("measures must live on one (base, dim, depth) grid");
  }
}

// log masses of jointly charged cells, ascending index order
std::vector<std::pair<double, double>> joint_log_terms(
    std::span<const Cell> mu_cells, std::span<const Cell> nu_cells) {
  std::vector<std::pair<double, double>> terms;
  terms.reserve(std::min(mu_cells.size(), nu_cells.size()));
  std::size_t i = 0, k = 0;
  while (i < mu_cells.size() && k < nu_cells.size()) {
    const std::uint64_t a = mu_cells[i].index;
    const std::uint64_t b = nu_cells[k].index;
    if (a < b) {
      ++i;
    } else if (b < a) {
      ++k;
    } else {
      terms.emplace_back(std::log(mu_cells[i].mass), std::log(nu_cells[k].mass));
      ++i;
      ++k;
    }
  }
  return terms;
}

double joint_log_sum(const std::vector<std::pair<double, double>>& terms,
                     double q, double t) {
  return log_sum_exp(terms.size(), [&](std::size_t i) {
    return q * terms[i].first + t * terms[i].second;
  });
}

// log S_j for every point and every level of [j_min, j_max], walking the
// coarsening chain from the full depth downward so each level is built once.
// Result: per point, log sums with levels ascending.
std::vector<std::vector<double>> scale_log_sums(
    const GridMeasure& mu, const GridMeasure& nu,
    const std::vector<std::pair<double, double>>& points, int j_min, int j_max,
    int workers) {
  check_common_grid(mu, nu);
  if (j_min < 1 || j_min >= j_max || j_max > mu.depth()) {
    throw std::invalid_argument("window must satisfy 1 <= j_min < j_max <= depth");
  }
  const std::size_t level_count = static_cast<std::size_t>(j_max - j_min + 1);
  std::vector<std::vector<double>> sums(points.size(),
                                        std::vector<double>(level_count));

  std::vector<Cell> cur_mu(mu.cells().begin(), mu.cells().end());
  std::vector<Cell> cur_nu(nu.cells().begin(), nu.cells().end());
  for (int level = mu.depth(); level >= j_min; --level) {
    if (level <= j_max) {
      const auto terms = joint_log_terms(cur_mu, cur_nu);
      if (terms.empty()) {
        std::ostringstream msg;
        msg << "empty joint support at depth " << level
            << "; the pair must share support";
        throw std::invalid_argument(msg.str());
      }
      parallel_for(points.size(), workers, [&](std::size_t p) {
        sums[p][static_cast<std::size_t>(level - j_min)] =
            joint_log_sum(terms, points[p].first, points[p].second);
      });
    }
    if (level > j_min) {
      cur_mu = coarsen_cells_one_level(cur_mu, mu.base(), mu.dim(), level);
      cur_nu = coarsen_cells_one_level(cur_nu, nu.base(), nu.dim(), level);
    }
  }
  return sums;
}

}  // namespace

double moment_sum(const GridMeasure& mu, const GridMeasure& nu, double q,
                  double t, int j) {
  check_common_grid(mu, nu);
  if (j < 0 || j > mu.depth()) {
    throw std::invalid_argument("depth j out of range");
  }
  const GridMeasure cmu = coarsen(mu, j);
  const GridMeasure cnu = coarsen(nu, j);
  const auto terms = joint_log_terms(cmu.cells(), cnu.cells());
  if (terms.empty()) {
    throw std::invalid_argument("empty joint support; the pair must share support");
  }
  return joint_log_sum(terms, q, t);
}

ScaleTable build_scale_table(const GridMeasure& mu, const GridMeasure& nu,
                             double q, double t, int j_min, int j_max) {
  const auto sums = scale_log_sums(mu, nu, {{q, t}}, j_min, j_max, 1);
  ScaleTable table;
  table.q = q;
  table.t = t;
  table.base = mu.base();
  for (int j = j_min; j <= j_max; ++j) table.levels.push_back(j);
  table.log_sums = sums.front();
  return table;
}

DimEstimates estimate_dims(const ScaleTable& table) {
  const std::size_t n = table.levels.size();
  if (n < 3) {
    throw std::invalid_argument("scale table needs at least 3 levels");
  }
  const double log_base = std::log(static_cast<double>(table.base));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = (table.log_sums[i + 1] - table.log_sums[i]) /
                     ((table.levels[i + 1] - table.levels[i]) * log_base);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = table.levels[i] * log_base;
  const OlsFit fit = ols_fit(x, table.log_sums);

  DimEstimates est;
  est.b = lo;
  est.Lambda = hi;
  // the OLS slope is a convex combination of chord slopes, each of which
  // averages consecutive increments; the clamp makes b <= B <= Lambda literal
  est.B = std::clamp(fit.slope, lo, hi);
  est.r2 = fit.r2;
  return est;
}

TauSurface tau_surface(const GridMeasure& mu, const GridMeasure& nu,
                       std::vector<double> q_grid, std::vector<double> t_grid,
                       int j_min, int j_max, int workers) {
  if (q_grid.empty() || t_grid.empty()) {
    throw std::invalid_argument("grids must be nonempty");
  }
  if (!std::is_sorted(q_grid.begin(), q_grid.end()) ||
      !std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw std::invalid_argument("grids must be sorted ascending");
  }
  std::vector<std::pair<double, double>> points;
  points.reserve(q_grid.size() * t_grid.size());
  for (double q : q_grid) {
    for (double t : t_grid) points.emplace_back(q, t);
  }
  const auto sums = scale_log_sums(mu, nu, points, j_min, j_max, workers);

  TauSurface surface;
  surface.q_grid = std::move(q_grid);
  surface.t_grid = std::move(t_grid);
  surface.j_min = j_min;
  surface.j_max = j_max;
  const std::size_t count = points.size();
  surface.b_est.resize(count);
  surface.B_est.resize(count);
  surface.Lambda_est.resize(count);
  surface.r2.resize(count);

  ScaleTable table;
  table.base = mu.base();
  for (int j = j_min; j <= j_max; ++j) table.levels.push_back(j);
  for (std::size_t p = 0; p < count; ++p) {
    table.q = points[p].first;
    table.t = points[p].second;
    table.log_sums = sums[p];
    const DimEstimates est = estimate_dims(table);
    surface.b_est[p] = est.b;
    surface.B_est[p] = est.B;
    surface.Lambda_est[p] = est.Lambda;
    surface.r2[p] = est.r2;
  }
  return surface;
}

std::vector<DimEstimates> estimate_dims_at(
    const GridMeasure& mu, const GridMeasure& nu,
    const std::vector<std::pair<double, double>>& points, int j_min, int j_max,
    int workers) {
  if (points.empty()) return {};
  const auto sums = scale_log_sums(mu, nu, points, j_min, j_max, workers);
  ScaleTable table;
  table.base = mu.base();
  for (int j = j_min; j <= j_max; ++j) table.levels.push_back(j);
  std::vector<DimEstimates> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    table.q = points[p].first;
    table.t = points[p].second;
    table.log_sums = sums[p];
    out[p] = estimate_dims(table);
  }
  return out;
}

void save_tau_csv(const TauSurface& surface, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  os << "q,t,b,B,Lambda,r2\n";
  char buf[160];
  for (std::size_t qi = 0; qi < surface.q_grid.size(); ++qi) {
    for (std::size_t ti = 0; ti < surface.t_grid.size(); ++ti) {
      const std::size_t p = surface.index(qi, ti);
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                    surface.q_grid[qi], surface.t_grid[ti], surface.b_est[p],
                    surface.B_est[p], surface.Lambda_est[p], surface.r2[p]);
      os << buf;
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

bool region_contains(RegionTag tag, double q, double t) {
  switch (tag) {
    case RegionTag::NegNeg: return q <= 0.0 && t <= 0.0;
    case RegionTag::NegUnit: return q <= 0.0 && t >= 0.0 && t <= 1.0;
    case RegionTag::UnitNeg: return q >= 0.0 && q <= 1.0 && t <= 0.0;
    case RegionTag::GeOne: return q >= 1.0 && t >= 1.0;
    case RegionTag::OpenNegNeg: return q < 0.0 && t < 0.0;
    case RegionTag::OpenNegUnit: return q < 0.0 && t > 0.0 && t < 1.0;
    case RegionTag::OpenUnitNeg: return q > 0.0 && q < 1.0 && t < 0.0;
  }
  return false;
}

std::string_view region_name(RegionTag tag) {
  switch (tag) {
    case RegionTag::NegNeg: return "neg-neg";
    case RegionTag::NegUnit: return "neg-unit";
    case RegionTag::UnitNeg: return "unit-neg";
    case RegionTag::GeOne: return "ge-one";
    case RegionTag::OpenNegNeg: return "open-neg-neg";
    case RegionTag::OpenNegUnit: return "open-neg-unit";
    case RegionTag::OpenUnitNeg: return "open-unit-neg";
  }
  return "unknown";
}

QTRegion default_region(RegionTag tag) {
  QTRegion region;
  region.tag = tag;
  switch (tag) {
    case RegionTag::NegNeg:
    case RegionTag::OpenNegNeg:
      region.points = {{-2.0, -2.0}, {-1.0, -0.5}, {-0.5, -2.0}};
      break;
    case RegionTag::NegUnit:
      region.points = {{-1.0, 0.5}, {-2.0, 1.0}};
      break;
    case RegionTag::OpenNegUnit:
      region.points = {{-1.0, 0.5}, {-2.0, 0.75}};
      break;
    case RegionTag::UnitNeg:
      region.points = {{0.5, -1.0}, {1.0, -2.0}};
      break;
    case RegionTag::OpenUnitNeg:
      region.points = {{0.5, -1.0}, {0.75, -2.0}};
      break;
    case RegionTag::GeOne:
      region.points = {{1.0, 1.0}, {2.0, 1.5}};
      break;
  }
  for (const auto& [q, t] : region.points) {
    if (!region_contains(tag, q, t)) {
      throw std::logic_error("default sample point escapes its region");
    }
  }
  return region;
}

std::vector<double> parse_range(std::string_view text) {
  const std::string s(text);
  double lo = 0.0, hi = 0.0, step = 0.0;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &extra) != 3) {
    throw std::invalid_argument("range must look like lo:hi:step, got '" + s + "'");
  }
  if (!(step > 0.0)) throw std::invalid_argument("range step must be positive");
  if (hi < lo) throw std::invalid_argument("range needs lo <= hi");
  std::vector<double> grid;
  const double slack = step * 1e-9;
  for (int k = 0;; ++k) {
    const double v = lo + k * step;
    if (v > hi + slack) break;
    grid.push_back(v);
  }
  return grid;
}

}  // namespace mmf
