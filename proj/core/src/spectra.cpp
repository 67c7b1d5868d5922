#include "mmf/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "mmf/numeric.hpp"

namespace mmf {

namespace {

double uniform_spacing(const std::vector<double>& grid, const char* axis) {
  if (grid.size() < 3) {
    throw std::invalid_argument(std::string(axis) +
                                " grid needs at least 3 points");
  }
  const double h = grid[1] - grid[0];
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (std::abs((grid[i + 1] - grid[i]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw std::invalid_argument(std::string(axis) + " grid must be uniform");
    }
  }
  return h;
}

std::int64_t bin_index(double value, double width) {
  // bins are (k*width, (k+1)*width]: an exact edge hit goes to the lower bin
  return static_cast<std::int64_t>(std::ceil(value / width)) - 1;
}

}  // namespace

std::vector<LegendrePoint> legendre(const TauSurface& surface) {
  const double hq = uniform_spacing(surface.q_grid, "q");
  const double ht = uniform_spacing(surface.t_grid, "t");
  const std::size_t nq = surface.q_grid.size();
  const std::size_t nt = surface.t_grid.size();

  std::vector<LegendrePoint> points;
  points.reserve(nq * nt);
  for (std::size_t qi = 0; qi < nq; ++qi) {
    for (std::size_t ti = 0; ti < nt; ++ti) {
      const auto B = [&](std::size_t a, std::size_t b) {
        return surface.B_est[surface.index(a, b)];
      };
      double dq;
      if (qi == 0) {
        dq = (B(1, ti) - B(0, ti)) / hq;
      } else if (qi == nq - 1) {
        dq = (B(nq - 1, ti) - B(nq - 2, ti)) / hq;
      } else {
        dq = (B(qi + 1, ti) - B(qi - 1, ti)) / (2.0 * hq);
      }
      double dt;
      if (ti == 0) {
        dt = (B(qi, 1) - B(qi, 0)) / ht;
      } else if (ti == nt - 1) {
        dt = (B(qi, nt - 1) - B(qi, nt - 2)) / ht;
      } else {
        dt = (B(qi, ti + 1) - B(qi, ti - 1)) / (2.0 * ht);
      }
      LegendrePoint pt;
      pt.q = surface.q_grid[qi];
      pt.t = surface.t_grid[ti];
      pt.alpha = -dq;
      pt.beta = -dt;
      pt.f = pt.alpha * pt.q + pt.beta * pt.t + B(qi, ti);
      points.push_back(pt);
    }
  }
  return points;
}

ExponentField pointwise_exponents(const GridMeasure& mu, const GridMeasure& nu,
                                  int j_min, int j_max) {
  if (mu.base() != nu.base() || mu.dim() != nu.dim() ||
      mu.depth() != nu.depth()) {
    throw std::invalid_argument("measures must live on one (base, dim, depth) grid");
  }
  if (j_min < 1 || j_min >= j_max || j_max > mu.depth()) {
    throw std::invalid_argument("window must satisfy 1 <= j_min < j_max <= depth");
  }

  // one coarsening chain per measure, levels j_min .. j_max
  const std::size_t levels = static_cast<std::size_t>(j_max - j_min + 1);
  std::vector<std::vector<Cell>> mu_chain(levels), nu_chain(levels);
  {
    std::vector<Cell> cm(mu.cells().begin(), mu.cells().end());
    std::vector<Cell> cn(nu.cells().begin(), nu.cells().end());
    for (int level = mu.depth(); level >= j_min; --level) {
      if (level <= j_max) {
        mu_chain[static_cast<std::size_t>(level - j_min)] = cm;
        nu_chain[static_cast<std::size_t>(level - j_min)] = cn;
      }
      if (level > j_min) {
        cm = coarsen_cells_one_level(cm, mu.base(), mu.dim(), level);
        cn = coarsen_cells_one_level(cn, nu.base(), nu.dim(), level);
      }
    }
  }

  const auto& mu_fine = mu_chain.back();
  const auto& nu_fine = nu_chain.back();

  ExponentField field;
  field.base = mu.base();
  field.dim = mu.dim();
  field.level = j_max;

  // jointly charged cells at the finest window level
  {
    std::size_t i = 0, k = 0;
    while (i < mu_fine.size() && k < nu_fine.size()) {
      if (mu_fine[i].index < nu_fine[k].index) {
        ++i;
      } else if (nu_fine[k].index < mu_fine[i].index) {
        ++k;
      } else {
        field.cells.push_back(mu_fine[i].index);
        ++i;
        ++k;
      }
    }
  }
  if (field.cells.empty()) {
    throw std::invalid_argument("empty joint support; the pair must share support");
  }

  const double log_base = std::log(static_cast<double>(mu.base()));
  std::vector<double> x(levels), y(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    x[l] = -(j_min + static_cast<int>(l)) * log_base;
  }

  // mass of ancestor cells by binary search per level (cells stay sorted)
  GridMeasure probe(mu.base(), mu.dim(), j_max, {});  // index arithmetic only
  const auto ancestor_mass = [&](const std::vector<Cell>& level_cells,
                                 std::uint64_t fine_index, int level) {
    const std::uint64_t parent = probe.parent_index(fine_index, level);
    const auto it = std::lower_bound(
        level_cells.begin(), level_cells.end(), parent,
        [](const Cell& c, std::uint64_t v) { return c.index < v; });
    return it->mass;  // ancestors of charged cells are charged
  };

  const std::size_t count = field.cells.size();
  field.alpha_mu.resize(count);
  field.alpha_nu.resize(count);
  field.gamma.resize(count);
  field.residual_mu.resize(count);
  field.residual_nu.resize(count);
  for (std::size_t c = 0; c < count; ++c) {
    const std::uint64_t idx = field.cells[c];
    for (std::size_t l = 0; l < levels; ++l) {
      y[l] = std::log(
          ancestor_mass(mu_chain[l], idx, j_min + static_cast<int>(l)));
    }
    OlsFit fit = ols_fit(x, y);
    field.alpha_mu[c] = fit.slope;
    field.residual_mu[c] = fit.max_residual;
    for (std::size_t l = 0; l < levels; ++l) {
      y[l] = std::log(
          ancestor_mass(nu_chain[l], idx, j_min + static_cast<int>(l)));
    }
    fit = ols_fit(x, y);
    field.alpha_nu[c] = fit.slope;
    field.residual_nu[c] = fit.max_residual;
    field.gamma[c] = field.alpha_nu[c] > 0.0
                         ? field.alpha_mu[c] / field.alpha_nu[c]
                         : std::numeric_limits<double>::quiet_NaN();
  }
  return field;
}

HistogramSpectrum histogram_spectrum(const ExponentField& field,
                                     double bin_width, int j) {
  if (!(bin_width > 0.0)) {
    throw std::invalid_argument("bin width must be positive");
  }
  if (j < 1) throw std::invalid_argument("level j must be >= 1");

  std::vector<std::pair<std::int64_t, std::int64_t>> keys;
  keys.reserve(field.cells.size());
  for (std::size_t c = 0; c < field.cells.size(); ++c) {
    keys.emplace_back(bin_index(field.alpha_mu[c], bin_width),
                      bin_index(field.alpha_nu[c], bin_width));
  }
  std::sort(keys.begin(), keys.end());

  HistogramSpectrum spectrum;
  spectrum.bin_width = bin_width;
  spectrum.level = j;
  spectrum.base = field.base;
  const double denom = j * std::log(static_cast<double>(field.base));
  std::size_t i = 0;
  while (i < keys.size()) {
    const auto key = keys[i];
    std::uint64_t count = 0;
    while (i < keys.size() && keys[i] == key) {
      ++count;
      ++i;
    }
    HistogramBin bin;
    bin.ia = key.first;
    bin.ib = key.second;
    bin.count = count;
    bin.dim_est = std::log(static_cast<double>(count)) / denom;
    spectrum.bins.push_back(bin);
  }
  return spectrum;
}

HistogramBin HistogramSpectrum::at(double alpha, double beta) const {
  HistogramBin probe;
  probe.ia = bin_index(alpha, bin_width);
  probe.ib = bin_index(beta, bin_width);
  const auto it = std::lower_bound(
      bins.begin(), bins.end(), probe, [](const HistogramBin& a, const HistogramBin& b) {
        return a.ia != b.ia ? a.ia < b.ia : a.ib < b.ib;
      });
  if (it != bins.end() && it->ia == probe.ia && it->ib == probe.ib) return *it;
  probe.count = 0;
  probe.dim_est = -std::numeric_limits<double>::infinity();
  return probe;
}

RatioSelection ratio_set(const ExponentField& field, double gamma, double tol,
                         int j) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (j < 1) throw std::invalid_argument("level j must be >= 1");
  std::uint64_t count = 0;
  for (double g : field.gamma) {
    if (std::abs(g - gamma) <= tol) ++count;  // NaN never qualifies
  }
  RatioSelection sel;
  sel.count = count;
  sel.dim_est = count == 0 ? -std::numeric_limits<double>::infinity()
                           : std::log(static_cast<double>(count)) /
                                 (j * std::log(static_cast<double>(field.base)));
  return sel;
}

void save_legendre_csv(const std::vector<LegendrePoint>& points,
                       const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  os << "alpha,beta,f_legendre\n";
  char buf[120];
  for (const LegendrePoint& pt : points) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", pt.alpha, pt.beta,
                  pt.f);
    os << buf;
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

void save_histogram_csv(const HistogramSpectrum& spectrum,
                        const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  os << "alpha_bin,beta_bin,count,f_hist\n";
  char buf[160];
  for (const HistogramBin& bin : spectrum.bins) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%llu,%.12g\n",
                  (bin.ia + 0.5) * spectrum.bin_width,
                  (bin.ib + 0.5) * spectrum.bin_width,
                  static_cast<unsigned long long>(bin.count), bin.dim_est);
    os << buf;
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace mmf
