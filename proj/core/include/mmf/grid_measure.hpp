#pragma once

// Sparse nonnegative measures on b-adic grids over the unit cube.
//
// A GridMeasure of base b, dimension n and depth L assigns mass to the cells
// of the regular b^L grid on [0,1]^n. Only charged cells (mass > 0) are
// stored, as (flattened index, mass) pairs sorted by index.
//
// Index convention: row-major over axes with axis 0 most significant. With
// N = b^L per-axis cells and per-axis coordinates c_a in [0, N),
//
//     index = c_0 * N^(n-1) + c_1 * N^(n-2) + ... + c_(n-1).
//
// Within one axis the coordinate is a base-b integer whose most significant
// digit is the coarsest subdivision, so the level-j ancestor of a cell is
// obtained by dividing each coordinate by b^(L-j).

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mmf/numeric.hpp"

namespace mmf {

struct Cell {
  std::uint64_t index = 0;
  double mass = 0.0;
};

// Affine frame recorded by regridding (one lo/hi pair per axis). In-memory
// metadata only: the on-disk format does not carry it and every dimension
// estimate is invariant under it. Empty means the unit cube.
struct Frame {
  std::vector<double> lo;
  std::vector<double> hi;
  [[nodiscard]] bool empty() const { return lo.empty(); }
};

class GridMeasure {
 public:
  // cells must be strictly ascending by index; masses must be finite and
  // >= 0 (exact zeros are dropped since absence already encodes zero mass).
  // Throws std::invalid_argument on any violated precondition, including
  // base^(dim*depth) overflowing the 63-bit index space.
  GridMeasure(int base, int dim, int depth, std::vector<Cell> cells);

  [[nodiscard]] int base() const { return base_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int depth() const { return depth_; }
  [[nodiscard]] const std::vector<Cell>& cells() const { return cells_; }
  [[nodiscard]] std::size_t cell_count() const { return cells_.size(); }

  [[nodiscard]] const Frame& frame() const { return frame_; }
  void set_frame(Frame f);

  // b^level cells per axis; level defaults to the measure depth
  [[nodiscard]] std::uint64_t axis_side() const { return axis_side(depth_); }
  [[nodiscard]] std::uint64_t axis_side(int level) const;

  // compensated, ascending cell order
  [[nodiscard]] double total_mass() const;

  // 0 for absent cells; binary search
  [[nodiscard]] double mass_at(std::uint64_t index) const;

  [[nodiscard]] std::uint64_t flatten(std::span<const std::uint64_t> coords) const;
  void unflatten(std::uint64_t index, std::span<std::uint64_t> coords) const;

  // index of the enclosing cell at a coarser level, 0 <= level <= depth
  [[nodiscard]] std::uint64_t parent_index(std::uint64_t index, int level) const;

  // center of a depth-level cell, mapped through the frame when one is set
  [[nodiscard]] std::vector<double> cell_center(std::uint64_t index) const;
  // allocation-free variant for hot loops; out.size() must equal dim()
  void cell_center(std::uint64_t index, std::span<double> out) const;

 private:
  int base_ = 2;
  int dim_ = 1;
  int depth_ = 0;
  std::vector<Cell> cells_;
  Frame frame_;
};

// Full coarsening to a coarser level. Proceeds one level at a time with
// compensated per-parent sums in ascending child order, so for j < j' the
// chain through j' lands on the same bytes as coarsening straight to j.
[[nodiscard]] GridMeasure coarsen(const GridMeasure& m, int level);

// One coarsening step for raw cells at child_level (> 0). Exposed for the
// scale-table hot path which never materializes intermediate GridMeasures.
[[nodiscard]] std::vector<Cell> coarsen_cells_one_level(std::span<const Cell> cells,
                                                        int base, int dim,
                                                        int child_level);

// ---- serialization ---------------------------------------------------------
//
// Text format, one measure per file:
//
//     MMF1 <base> <dim> <depth> <cell_count>
//     <index> <mass>
//     ...
//
// indices strictly ascending, masses printed with 17 significant digits so
// the decimal text round-trips doubles bit-exactly. Loading validates the
// header, the cell count, index order and range, mass positivity and total
// mass 1 within 1e-9, and throws std::runtime_error with a diagnostic.

void save_measure(const GridMeasure& m, const std::filesystem::path& path);
[[nodiscard]] GridMeasure load_measure(const std::filesystem::path& path);

}  // namespace mmf
