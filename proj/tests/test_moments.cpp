#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "doctest.h"
#include "mmf/generators.hpp"
#include "mmf/moments.hpp"
#include "support.hpp"

using namespace mmf;

namespace {

MeasurePair binomial_pair(int depth) {
  return preset_pair(preset_spec("binomial-pair"), depth);
}

// closed form for the binomial pair: log_2(0.7^q 0.5^t + 0.3^q 0.5^t)
double closed_form(double q, double t) {
  return std::log2(std::pow(0.7, q) * std::pow(0.5, t) +
                   std::pow(0.3, q) * std::pow(0.5, t));
}

}  // namespace

TEST_SUITE("moments") {

TEST_CASE("moment sums of an exactly self-similar pair are geometric") {
  const auto pair = binomial_pair(6);
  for (auto [q, t] : std::vector<std::pair<double, double>>{
           {1.0, 0.0}, {2.0, 1.0}, {-2.0, -2.0}, {0.5, -1.0}}) {
    const double rate = closed_form(q, t) * std::log(2.0);
    for (int j = 1; j <= 6; ++j) {
      CHECK(moment_sum(pair.mu, pair.nu, q, t, j) ==
            doctest::Approx(j * rate).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("moment_sum validates its inputs") {
  const auto pair = binomial_pair(4);
  // j = 0 is the root cell: both masses are 1, so the log sum vanishes
  CHECK(moment_sum(pair.mu, pair.nu, 1.0, 1.0, 0) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)moment_sum(pair.mu, pair.nu, 1.0, 1.0, -1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)moment_sum(pair.mu, pair.nu, 1.0, 1.0, 5),
                  std::invalid_argument);
  const auto other = binomial_pair(5);
  CHECK_THROWS_AS((void)moment_sum(pair.mu, other.nu, 1.0, 1.0, 2),
                  std::invalid_argument);
}

TEST_CASE("disjoint supports have no joint moments") {
  // complementary single-branch cascades share no cell at any level >= 1
  SelfSimilarSpec spec;
  spec.p = {1.0, 0.0};
  spec.w = {0.0, 1.0};
  spec.ratios = {0.5, 0.5};
  spec.offsets = {{0.0}, {0.5}};
  const auto mu = multinomial_cascade(spec, Component::First, 4);
  const auto nu = multinomial_cascade(spec, Component::Second, 4);
  CHECK_THROWS_AS((void)moment_sum(mu, nu, 1.0, 1.0, 2),
                  std::invalid_argument);
}

TEST_CASE("scale table covers the requested window") {
  const auto pair = binomial_pair(6);
  const auto table = build_scale_table(pair.mu, pair.nu, 1.0, 1.0, 2, 5);
  REQUIRE(table.levels.size() == 4);
  CHECK(table.levels.front() == 2);
  CHECK(table.levels.back() == 5);
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    CHECK(table.log_sums[i] ==
          moment_sum(pair.mu, pair.nu, 1.0, 1.0, table.levels[i]));
  }
  CHECK_THROWS_AS(
      (void)build_scale_table(pair.mu, pair.nu, 1.0, 1.0, 0, 5),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)build_scale_table(pair.mu, pair.nu, 1.0, 1.0, 3, 3),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)build_scale_table(pair.mu, pair.nu, 1.0, 1.0, 1, 7),
      std::invalid_argument);
}

TEST_CASE("estimate_dims needs three levels") {
  ScaleTable table;
  table.base = 2;
  table.levels = {1, 2};
  table.log_sums = {0.0, -1.0};
  CHECK_THROWS_AS((void)estimate_dims(table), std::invalid_argument);
}

TEST_CASE("estimates on the binomial pair hit the closed form") {
  const auto pair = binomial_pair(8);
  const auto table = build_scale_table(pair.mu, pair.nu, 2.0, 1.0, 1, 8);
  const auto est = estimate_dims(table);
  CHECK(est.B == doctest::Approx(-1.7858751946471527).epsilon(1e-13));
  CHECK(est.b == doctest::Approx(est.B).epsilon(1e-12));
  CHECK(est.Lambda == doctest::Approx(est.B).epsilon(1e-12));
  CHECK(est.r2 >= 1.0 - 1e-12);

  const auto at_10 =
      estimate_dims(build_scale_table(pair.mu, pair.nu, 1.0, 0.0, 1, 8));
  CHECK(at_10.B == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  const auto at_11 =
      estimate_dims(build_scale_table(pair.mu, pair.nu, 1.0, 1.0, 1, 8));
  CHECK(at_11.B == doctest::Approx(-1.0).epsilon(1e-12));
  const auto at_00 =
      estimate_dims(build_scale_table(pair.mu, pair.nu, 0.0, 0.0, 1, 8));
  CHECK(at_00.B == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ordering b <= B <= Lambda is literal, even off self-similarity") {
  // hand-made non-geometric masses: normalized 1..2^d on the full grid
  const int depth = 6;
  const std::uint64_t n = 1ull << depth;
  std::vector<Cell> cells_mu, cells_nu;
  double tot_mu = 0.0, tot_nu = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    tot_mu += double(i + 1);
    tot_nu += double((i * 37) % 101 + 1);
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    cells_mu.push_back({i, double(i + 1) / tot_mu});
    cells_nu.push_back({i, double((i * 37) % 101 + 1) / tot_nu});
  }
  const GridMeasure mu(2, 1, depth, std::move(cells_mu));
  const GridMeasure nu(2, 1, depth, std::move(cells_nu));
  for (double q : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
    for (double t : {-1.5, 0.0, 0.5, 2.0}) {
      const auto est =
          estimate_dims(build_scale_table(mu, nu, q, t, 1, depth));
      CHECK(est.b <= est.B);
      CHECK(est.B <= est.Lambda);
    }
  }
}

TEST_CASE("tau_surface is bitwise independent of the worker count") {
  const auto pair = binomial_pair(7);
  const auto grid = parse_range("-2:2:1");
  const auto one = tau_surface(pair.mu, pair.nu, grid, grid, 1, 7, 1);
  const auto many = tau_surface(pair.mu, pair.nu, grid, grid, 1, 7, 4);
  REQUIRE(one.point_count() == many.point_count());
  for (std::size_t i = 0; i < one.point_count(); ++i) {
    CHECK(one.b_est[i] == many.b_est[i]);
    CHECK(one.B_est[i] == many.B_est[i]);
    CHECK(one.Lambda_est[i] == many.Lambda_est[i]);
    CHECK(one.r2[i] == many.r2[i]);
  }
}

TEST_CASE("estimate_dims_at matches tau_surface point for point") {
  const auto pair = binomial_pair(7);
  const std::vector<std::pair<double, double>> pts{
      {-2.0, 1.0}, {-0.5, -0.5}, {0.0, 0.0}, {1.5, -1.0}};
  const auto individual = estimate_dims_at(pair.mu, pair.nu, pts, 1, 7);
  REQUIRE(individual.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto surface = tau_surface(pair.mu, pair.nu, {pts[i].first},
                                     {pts[i].second}, 1, 7, 1);
    CHECK(individual[i].b == surface.b_est[0]);
    CHECK(individual[i].B == surface.B_est[0]);
    CHECK(individual[i].Lambda == surface.Lambda_est[0]);
  }
  CHECK(estimate_dims_at(pair.mu, pair.nu, {}, 1, 7).empty());
}

TEST_CASE("tau_surface validates the grids") {
  const auto pair = binomial_pair(4);
  CHECK_THROWS_AS(
      (void)tau_surface(pair.mu, pair.nu, {}, {0.0}, 1, 4, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)tau_surface(pair.mu, pair.nu, {1.0, 0.0}, {0.0}, 1, 4, 1),
      std::invalid_argument);
}

TEST_CASE("region predicates and names") {
  CHECK(region_contains(RegionTag::NegNeg, 0.0, 0.0));
  CHECK_FALSE(region_contains(RegionTag::OpenNegNeg, 0.0, -1.0));
  CHECK(region_contains(RegionTag::OpenNegUnit, -1.0, 0.5));
  CHECK_FALSE(region_contains(RegionTag::OpenNegUnit, -1.0, 1.0));
  CHECK(region_contains(RegionTag::GeOne, 1.0, 1.0));
  CHECK_FALSE(region_contains(RegionTag::GeOne, 0.99, 1.0));
  CHECK(region_name(RegionTag::UnitNeg) == "unit-neg");
  CHECK(region_name(RegionTag::OpenUnitNeg) == "open-unit-neg");
}

TEST_CASE("default regions sample inside their own tag") {
  for (RegionTag tag :
       {RegionTag::NegNeg, RegionTag::NegUnit, RegionTag::UnitNeg,
        RegionTag::GeOne, RegionTag::OpenNegNeg, RegionTag::OpenNegUnit,
        RegionTag::OpenUnitNeg}) {
    const auto region = default_region(tag);
    CHECK(region.tag == tag);
    CHECK_FALSE(region.points.empty());
    for (const auto& [q, t] : region.points) {
      CHECK(region_contains(tag, q, t));
    }
  }
}

TEST_CASE("parse_range") {
  const auto grid = parse_range("-2:2:0.5");
  REQUIRE(grid.size() == 9);
  CHECK(grid.front() == -2.0);
  CHECK(grid.back() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(parse_range("1:1:1") == std::vector<double>{1.0});
  CHECK(parse_range("0:1:0.3").size() == 4);  // 1.2 overshoots the endpoint
  CHECK_THROWS_AS((void)parse_range("1:2"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_range("abc"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_range("0:1:0"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_range("2:1:0.5"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_range("1:2:0.5x"), std::invalid_argument);
}

TEST_CASE("tau csv rows follow the documented shape") {
  testsup::TempDir tmp;
  TauSurface s;
  s.q_grid = {0.0, 1.0};
  s.t_grid = {0.0};
  s.b_est = {1.0, 0.25};
  s.B_est = {1.5, 0.5};
  s.Lambda_est = {2.0, 0.75};
  s.r2 = {1.0, 0.9875};
  const auto path = tmp.file("tau.csv");
  save_tau_csv(s, path);
  CHECK(testsup::read_file(path) ==
        "q,t,b,B,Lambda,r2\n"
        "0,0,1,1.5,2,1\n"
        "1,0,0.25,0.5,0.75,0.9875\n");
}

}  // TEST_SUITE
