#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mmf/generators.hpp"
#include "mmf/moments.hpp"
#include "mmf/spectra.hpp"
#include "support.hpp"

using namespace mmf;

namespace {

MeasurePair binomial_pair(int depth) {
  return preset_pair(preset_spec("binomial-pair"), depth);
}

// reference slope of log mass against -j*log(base) over levels 1..depth for a
// given digit string (most significant digit first)
double reference_slope(const std::vector<int>& digits,
                       const std::vector<double>& log_p) {
  const int n = static_cast<int>(digits.size());
  const double ln2 = std::log(2.0);
  std::vector<double> x(n), y(n);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    acc += log_p[digits[j]];
    x[j] = -(j + 1) * ln2;
    y[j] = acc;
  }
  double xbar = 0.0, ybar = 0.0;
  for (int j = 0; j < n; ++j) {
    xbar += x[j];
    ybar += y[j];
  }
  xbar /= n;
  ybar /= n;
  double num = 0.0, den = 0.0;
  for (int j = 0; j < n; ++j) {
    num += (x[j] - xbar) * (y[j] - ybar);
    den += (x[j] - xbar) * (x[j] - xbar);
  }
  return num / den;
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("legendre recovers the transform of an exact surface") {
  // surface B(q,t) = 1 - q - 2t on a 0.1-spaced grid: alpha = 1, beta = 2,
  // f = q + 2t + B = 1 everywhere (linear surface, differences are exact)
  TauSurface s;
  s.q_grid = {-0.1, 0.0, 0.1};
  s.t_grid = {-0.1, 0.0, 0.1};
  for (double q : s.q_grid) {
    for (double t : s.t_grid) {
      s.b_est.push_back(0.0);
      s.B_est.push_back(1.0 - q - 2.0 * t);
      s.Lambda_est.push_back(0.0);
      s.r2.push_back(1.0);
    }
  }
  const auto pts = legendre(s);
  REQUIRE(pts.size() == 9);
  for (const auto& pt : pts) {
    CHECK(pt.alpha == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pt.beta == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pt.f == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("legendre at the binomial center matches the closed-form gradient") {
  const auto pair = binomial_pair(10);
  const std::vector<double> grid{-0.1, 0.0, 0.1};
  const auto surface = tau_surface(pair.mu, pair.nu, grid, grid, 1, 10, 1);
  const auto pts = legendre(surface);
  const auto& center = pts[surface.index(1, 1)];
  CHECK(center.q == 0.0);
  CHECK(center.t == 0.0);
  // central difference of log2(0.7^q + 0.3^q) over h = 0.1 at q = 0
  const double want_alpha =
      -(std::log2(std::pow(0.7, 0.1) + std::pow(0.3, 0.1)) -
        std::log2(std::pow(0.7, -0.1) + std::pow(0.3, -0.1))) /
      0.2;
  CHECK(center.alpha == doctest::Approx(want_alpha).epsilon(1e-10));
  CHECK(center.alpha == doctest::Approx(1.1257693834979823).epsilon(1e-10));
  CHECK(center.beta == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(center.f == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("legendre validates grid shape") {
  TauSurface s;
  s.q_grid = {0.0, 1.0};  // too short
  s.t_grid = {0.0, 0.5, 1.0};
  s.b_est.assign(6, 0.0);
  s.B_est.assign(6, 0.0);
  s.Lambda_est.assign(6, 0.0);
  s.r2.assign(6, 1.0);
  CHECK_THROWS_AS((void)legendre(s), std::invalid_argument);

  s.q_grid = {0.0, 0.1, 0.35};  // non-uniform
  s.t_grid = {0.0, 0.5, 1.0};
  s.b_est.assign(9, 0.0);
  s.B_est.assign(9, 0.0);
  s.Lambda_est.assign(9, 0.0);
  s.r2.assign(9, 1.0);
  CHECK_THROWS_AS((void)legendre(s), std::invalid_argument);
}

TEST_CASE("pointwise exponents of a geometric pair") {
  const auto pair = binomial_pair(6);
  const auto field = pointwise_exponents(pair.mu, pair.nu, 1, 6);
  REQUIRE(field.cells.size() == 64);
  CHECK(field.level == 6);

  // purely one-branch cells carry the single-branch exponents exactly
  const std::size_t first = 0;           // digit string 000000
  const std::size_t last = 63;           // digit string 111111
  CHECK(field.cells[first] == 0);
  CHECK(field.cells[last] == 63);
  CHECK(field.alpha_mu[first] ==
        doctest::Approx(0.5145731728297583).epsilon(1e-12));
  CHECK(field.alpha_mu[last] ==
        doctest::Approx(1.7369655941662063).epsilon(1e-12));

  const std::vector<double> log_p{std::log(0.7), std::log(0.3)};
  for (std::uint64_t idx : {5ull, 21ull, 42ull, 60ull}) {
    std::vector<int> digits(6);
    for (int j = 0; j < 6; ++j) digits[j] = int((idx >> (5 - j)) & 1);
    CHECK(field.alpha_mu[idx] ==
          doctest::Approx(reference_slope(digits, log_p)).epsilon(1e-12));
  }

  // uniform second measure: alpha_nu = 1, gamma = alpha_mu, and the fit is
  // exact at every cell
  for (std::size_t c = 0; c < field.cells.size(); ++c) {
    CHECK(field.alpha_nu[c] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(field.gamma[c] == doctest::Approx(field.alpha_mu[c]).epsilon(1e-12));
    CHECK(field.residual_nu[c] <= 1e-12);
  }

  // the first measure is exactly geometric only along constant digit strings;
  // a mixed string bends the mass graph and leaves a real residual
  CHECK(field.residual_mu[first] <= 1e-12);
  CHECK(field.residual_mu[last] <= 1e-12);
  CHECK(field.residual_mu[21] > 0.01);  // 010101
}

TEST_CASE("pointwise exponents validate the window") {
  const auto pair = binomial_pair(4);
  CHECK_THROWS_AS((void)pointwise_exponents(pair.mu, pair.nu, 2, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)pointwise_exponents(pair.mu, pair.nu, 0, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)pointwise_exponents(pair.mu, pair.nu, 1, 5),
                  std::invalid_argument);
}

TEST_CASE("histogram bins follow the (k*w, (k+1)*w] convention") {
  ExponentField field;
  field.base = 2;
  field.dim = 1;
  field.level = 4;
  field.cells = {0, 1, 2, 3};
  field.alpha_mu = {0.4, 0.4000000001, -0.3, 0.71};
  field.alpha_nu = {1.0, 1.0, 1.0, 1.0};
  field.gamma = {0.4, 0.4000000001, -0.3, 0.71};
  field.residual_mu.assign(4, 0.0);
  field.residual_nu.assign(4, 0.0);

  const auto spec = histogram_spectrum(field, 0.2, 4);
  REQUIRE(spec.bins.size() == 4);
  // sorted by (ia, ib): -0.3 -> bin -2; 0.4 on the edge -> bin 1 (lower);
  // 0.4+eps crosses into bin 2; 0.71 -> bin 3
  CHECK(spec.bins[0].ia == -2);
  CHECK(spec.bins[1].ia == 1);
  CHECK(spec.bins[2].ia == 2);
  CHECK(spec.bins[3].ia == 3);
  for (const auto& bin : spec.bins) CHECK(bin.count == 1);

  const auto hit = spec.at(0.4, 1.0);
  CHECK(hit.ia == 1);
  CHECK(hit.count == 1);
  CHECK(hit.dim_est == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  const auto miss = spec.at(5.0, 5.0);
  CHECK(miss.count == 0);
  CHECK(miss.dim_est == -std::numeric_limits<double>::infinity());

  CHECK_THROWS_AS((void)histogram_spectrum(field, 0.0, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)histogram_spectrum(field, 0.2, 0),
                  std::invalid_argument);
}

TEST_CASE("depth-12 binomial histogram matches the reference counts") {
  const auto pair = binomial_pair(12);
  const auto field = pointwise_exponents(pair.mu, pair.nu, 1, 12);
  const auto spec = histogram_spectrum(field, 0.2, 12);

  // alpha-bin profile of the OLS exponents over all 4096 digit strings,
  // computed independently from the digit-path definition
  const std::map<std::int64_t, std::uint64_t> want{
      {2, 6}, {3, 186}, {4, 878}, {5, 1564}, {6, 1128}, {7, 306}, {8, 28}};
  REQUIRE(spec.bins.size() == want.size());
  for (const auto& bin : spec.bins) {
    CHECK(bin.ib == 4);  // uniform second measure: beta = 1 for every cell
    REQUIRE(want.count(bin.ia) == 1);
    CHECK(bin.count == want.at(bin.ia));
  }

  // modal bin carries the analytic-anchor estimate used downstream
  const auto anchor = spec.at(1.1257693834979823, 1.0);
  CHECK(anchor.count == 1564);
  CHECK(anchor.dim_est ==
        doctest::Approx(std::log2(1564.0) / 12.0).epsilon(1e-12));
}

TEST_CASE("ratio-set selection on the depth-12 binomial pair") {
  const auto pair = binomial_pair(12);
  const auto field = pointwise_exponents(pair.mu, pair.nu, 1, 12);
  const auto sel = ratio_set(field, 1.1258, 0.05, 12);
  CHECK(sel.count == 784);
  CHECK(sel.dim_est == doctest::Approx(std::log2(784.0) / 12.0).epsilon(1e-12));

  const auto empty = ratio_set(field, 50.0, 0.01, 12);
  CHECK(empty.count == 0);
  CHECK(empty.dim_est == -std::numeric_limits<double>::infinity());

  CHECK_THROWS_AS((void)ratio_set(field, 1.0, 0.0, 12), std::invalid_argument);
  CHECK_THROWS_AS((void)ratio_set(field, 1.0, 0.1, 0), std::invalid_argument);
}

TEST_CASE("gamma is NaN when the second exponent is not positive") {
  ExponentField field;
  field.base = 2;
  field.dim = 1;
  field.level = 2;
  field.cells = {0};
  field.alpha_mu = {1.0};
  field.alpha_nu = {0.0};
  field.gamma = {std::numeric_limits<double>::quiet_NaN()};
  field.residual_mu = {0.0};
  field.residual_nu = {0.0};
  const auto sel = ratio_set(field, 1.0, 100.0, 2);
  CHECK(sel.count == 0);  // NaN never matches any window
}

TEST_CASE("legendre csv rows") {
  testsup::TempDir tmp;
  std::vector<LegendrePoint> pts(2);
  pts[0] = {0.0, 0.0, 1.0, 1.0, 1.0};
  pts[1] = {1.0, 0.0, 0.875, 1.0, 0.875};
  const auto path = tmp.file("leg.csv");
  save_legendre_csv(pts, path);
  CHECK(testsup::read_file(path) ==
        "alpha,beta,f_legendre\n"
        "1,1,1\n"
        "0.875,1,0.875\n");
}

TEST_CASE("histogram csv rows print bin centers") {
  testsup::TempDir tmp;
  HistogramSpectrum spec;
  spec.bin_width = 0.2;
  spec.level = 4;
  spec.base = 2;
  HistogramBin b;
  b.ia = 4;
  b.ib = 4;
  b.count = 8;
  b.dim_est = 0.75;
  spec.bins.push_back(b);
  const auto path = tmp.file("hist.csv");
  save_histogram_csv(spec, path);
  CHECK(testsup::read_file(path) ==
        "alpha_bin,beta_bin,count,f_hist\n"
        "0.9,0.9,8,0.75\n");
}

}  // TEST_SUITE
