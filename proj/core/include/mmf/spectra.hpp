#pragma once
// Spectra derived from a dimension surface and from per-cell scaling data:
// Legendre transform points, joint pointwise exponents, histogram (coarse)
// spectra, and ratio-set selections.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mmf/grid_measure.hpp"
#include "mmf/moments.hpp"

namespace mmf {

struct LegendrePoint {
  double q = 0.0;
  double t = 0.0;
  double alpha = 0.0;  // -dB/dq
  double beta = 0.0;   // -dB/dt
  double f = 0.0;      // alpha*q + beta*t + B(q,t)
};

// Central differences on the surface's B estimates (one-sided at the grid
// boundary). Requires >= 3 points per axis and uniform spacing on each axis
// (tolerance 1e-9 relative); throws std::invalid_argument otherwise.
[[nodiscard]] std::vector<LegendrePoint> legendre(const TauSurface& surface);

// Per-cell scaling exponents at the window's finest level: OLS slopes of
// log mass against -j*log(base) over the ancestors of each jointly charged
// cell for j in [j_min, j_max]. residual_* stores the largest absolute
// regression residual (0 exactly when the cell's mass is exactly geometric).
// gamma = alpha_mu/alpha_nu, NaN where alpha_nu <= 0.
struct ExponentField {
  int base = 0;
  int dim = 0;
  int level = 0;  // depth the cells live at (= j_max of the window)
  std::vector<std::uint64_t> cells;
  std::vector<double> alpha_mu;
  std::vector<double> alpha_nu;
  std::vector<double> gamma;
  std::vector<double> residual_mu;
  std::vector<double> residual_nu;
};

// Requires a window with >= 2 levels inside both depths and a nonempty joint
// support at level j_max.
[[nodiscard]] ExponentField pointwise_exponents(const GridMeasure& mu,
                                                const GridMeasure& nu,
                                                int j_min, int j_max);

// 2-D bins over (alpha, beta), width bin_width on both axes, anchored at the
// origin; an exponent landing exactly on a bin edge goes to the lower bin,
// i.e. bin k covers (k*w, (k+1)*w]. dim_est = log(count)/(j*log base).
struct HistogramBin {
  std::int64_t ia = 0;  // alpha bin
  std::int64_t ib = 0;  // beta bin
  std::uint64_t count = 0;
  double dim_est = 0.0;
};

struct HistogramSpectrum {
  double bin_width = 0.0;
  int level = 0;  // the j used in the dimension estimates
  int base = 0;
  std::vector<HistogramBin> bins;  // sorted by (ia, ib)

  // Count/estimate of the bin containing (alpha, beta); count 0 and estimate
  // -inf when that bin is empty.
  [[nodiscard]] HistogramBin at(double alpha, double beta) const;
};

[[nodiscard]] HistogramSpectrum histogram_spectrum(const ExponentField& field,
                                                   double bin_width, int j);

// Cells with |gamma - target| <= tol, and the coarse dimension of that
// selection: log(count)/(j*log base), -inf when empty.
struct RatioSelection {
  std::uint64_t count = 0;
  double dim_est = 0.0;
};

[[nodiscard]] RatioSelection ratio_set(const ExponentField& field,
                                       double gamma, double tol, int j);

// CSV exports, 12 significant digits.
// Legendre: header alpha,beta,f_legendre (rows follow the surface order).
// Histogram: header alpha_bin,beta_bin,count,f_hist (bin centers, sorted).
void save_legendre_csv(const std::vector<LegendrePoint>& points,
                       const std::filesystem::path& path);
void save_histogram_csv(const HistogramSpectrum& spectrum,
                        const std::filesystem::path& path);

}  // namespace mmf
