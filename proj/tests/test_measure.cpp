#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mmf/generators.hpp"
#include "mmf/grid_measure.hpp"
#include "support.hpp"

using namespace mmf;

namespace {

GridMeasure binomial(int depth) {
  return multinomial_cascade(preset_spec("binomial-pair"), Component::First,
                             depth);
}

}  // namespace

TEST_SUITE("measure") {

TEST_CASE("constructor validates its cell list") {
  CHECK_THROWS_AS(GridMeasure(2, 1, 2, {{2, 0.5}, {1, 0.5}}),
                  std::invalid_argument);  // not ascending
  CHECK_THROWS_AS(GridMeasure(2, 1, 2, {{1, 0.5}, {1, 0.5}}),
                  std::invalid_argument);  // duplicate index
  CHECK_THROWS_AS(GridMeasure(2, 1, 2, {{1, -0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(GridMeasure(2, 1, 2, {{1, std::nan("")}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GridMeasure(2, 1, 2, {{4, 1.0}}),
                  std::invalid_argument);  // index beyond base^(dim*depth)
  CHECK_THROWS_AS(GridMeasure(2, 2, 32, {}),
                  std::invalid_argument);  // 2^64 cells overflow the index space
  CHECK_THROWS_AS(GridMeasure(1, 1, 2, {}), std::invalid_argument);
}

TEST_CASE("exact zero masses are dropped, not stored") {
  const GridMeasure m(2, 1, 1, {{0, 0.0}, {1, 1.0}});
  CHECK(m.cell_count() == 1);
  CHECK(m.cells().front().index == 1);
  CHECK(m.mass_at(0) == 0.0);
  CHECK(m.mass_at(1) == 1.0);
}

TEST_CASE("flatten and unflatten are inverse on a planar grid") {
  const GridMeasure m(2, 2, 3, {{0, 1.0}});
  const std::uint64_t side = m.axis_side();
  CHECK(side == 8);
  for (std::uint64_t x : {0ull, 3ull, 7ull}) {
    for (std::uint64_t y : {0ull, 5ull, 7ull}) {
      const std::uint64_t coords[2] = {x, y};
      const std::uint64_t idx = m.flatten(coords);
      CHECK(idx == x * side + y);
      std::uint64_t back[2] = {99, 99};
      m.unflatten(idx, back);
      CHECK(back[0] == x);
      CHECK(back[1] == y);
    }
  }
}

TEST_CASE("parent index divides each axis coordinate") {
  const GridMeasure m(2, 2, 3, {{0, 1.0}});
  // cell (5,3) at depth 3 sits in cell (1,0) of the 2x2 level-1 grid
  const std::uint64_t coords[2] = {5, 3};
  const std::uint64_t idx = m.flatten(coords);
  CHECK(m.parent_index(idx, 1) == 2);  // (1,0) flattened on a side-2 grid
  CHECK(m.parent_index(idx, 3) == idx);
  CHECK(m.parent_index(idx, 0) == 0);
}

TEST_CASE("cell centers honor the recorded frame") {
  GridMeasure m(2, 1, 2, {{1, 1.0}});
  CHECK(m.cell_center(1)[0] == doctest::Approx(0.375).epsilon(1e-15));
  m.set_frame({{2.0}, {6.0}});
  CHECK(m.cell_center(1)[0] == doctest::Approx(2.0 + 0.375 * 4.0).epsilon(1e-15));
}

TEST_CASE("total mass and point lookups") {
  const auto m = binomial(6);
  CHECK(m.cell_count() == 64);
  CHECK(m.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.mass_at(0) == doctest::Approx(std::pow(0.7, 6)).epsilon(1e-15));
  CHECK(m.mass_at((1ull << 6) - 1) ==
        doctest::Approx(std::pow(0.3, 6)).epsilon(1e-15));
}

TEST_CASE("coarsening one level at a time equals coarsening straight through") {
  const auto m = binomial(7);
  const auto direct = coarsen(m, 3);
  const auto chained = coarsen(coarsen(m, 5), 3);
  REQUIRE(direct.cell_count() == chained.cell_count());
  for (std::size_t i = 0; i < direct.cell_count(); ++i) {
    CHECK(direct.cells()[i].index == chained.cells()[i].index);
    CHECK(direct.cells()[i].mass == chained.cells()[i].mass);  // bitwise
  }
  CHECK(direct.depth() == 3);
  CHECK(direct.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coarsen_cells_one_level agrees with the full coarsen") {
  const auto m = binomial(5);
  const auto step = coarsen_cells_one_level(m.cells(), m.base(), m.dim(), 5);
  const auto full = coarsen(m, 4);
  REQUIRE(step.size() == full.cell_count());
  for (std::size_t i = 0; i < step.size(); ++i) {
    CHECK(step[i].index == full.cells()[i].index);
    CHECK(step[i].mass == full.cells()[i].mass);
  }
}

TEST_CASE("coarsened binomial masses match branch probabilities") {
  const auto level1 = coarsen(binomial(4), 1);
  REQUIRE(level1.cell_count() == 2);
  CHECK(level1.cells()[0].mass == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(level1.cells()[1].mass == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("save/load round-trips cells bit-for-bit") {
  testsup::TempDir tmp;
  const auto m = binomial(6);
  const auto path = tmp.file("m.mmf");
  save_measure(m, path);
  const auto back = load_measure(path);
  CHECK(back.base() == m.base());
  CHECK(back.dim() == m.dim());
  CHECK(back.depth() == m.depth());
  REQUIRE(back.cell_count() == m.cell_count());
  for (std::size_t i = 0; i < m.cell_count(); ++i) {
    CHECK(back.cells()[i].index == m.cells()[i].index);
    CHECK(back.cells()[i].mass == m.cells()[i].mass);  // 17 digits round-trip
  }
}

TEST_CASE("load rejects malformed files") {
  testsup::TempDir tmp;
  const auto path = tmp.file("bad.mmf");

  testsup::write_file(path, "NOPE 2 1 1 1\n0 1.0\n");
  CHECK_THROWS_AS((void)load_measure(path), std::runtime_error);

  testsup::write_file(path, "MMF1 2 1 1 2\n0 1.0\n");  // count overstates rows
  CHECK_THROWS_AS((void)load_measure(path), std::runtime_error);

  testsup::write_file(path, "MMF1 2 1 1 2\n1 0.5\n0 0.5\n");  // out of order
  CHECK_THROWS_AS((void)load_measure(path), std::runtime_error);

  testsup::write_file(path, "MMF1 2 1 1 1\n0 -1.0\n");
  CHECK_THROWS_AS((void)load_measure(path), std::runtime_error);

  testsup::write_file(path, "MMF1 2 1 1 1\n0 0.25\n");  // total mass != 1
  CHECK_THROWS_AS((void)load_measure(path), std::runtime_error);

  testsup::write_file(path, "MMF1 2 1 1 1\n7 1.0\n");  // index out of range
  CHECK_THROWS_AS((void)load_measure(path), std::runtime_error);

  CHECK_THROWS_AS((void)load_measure(tmp.file("absent.mmf")),
                  std::runtime_error);
}

}  // TEST_SUITE
