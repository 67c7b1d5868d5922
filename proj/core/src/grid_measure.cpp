#include "mmf/grid_measure.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace mmf {

namespace {

[[nodiscard]] std::uint64_t checked_pow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::uint64_t{1} << 62) / b) {
      throw std::invalid_argument("grid cell count overflows the index space");
    }
    r *= b;
  }
  return r;
}

}  // namespace

GridMeasure::GridMeasure(int base, int dim, int depth, std::vector<Cell> cells)
    : base_(base), dim_(dim), depth_(depth), cells_(std::move(cells)) {
  if (base_ < 2) throw std::invalid_argument("grid base must be >= 2");
  if (dim_ < 1) throw std::invalid_argument("grid dimension must be >= 1");
  if (depth_ < 0) throw std::invalid_argument("grid depth must be >= 0");
  const std::uint64_t total = checked_pow(static_cast<std::uint64_t>(base_),
                                          dim_ * depth_);
  std::uint64_t prev = 0;
  bool first = true;
  std::size_t keep = 0;
  for (const Cell& c : cells_) {
    if (!std::isfinite(c.mass) || c.mass < 0.0) {
      throw std::invalid_argument("cell mass must be finite and >= 0");
    }
    if (c.index >= total) {
      throw std::invalid_argument("cell index out of range for grid");
    }
    if (!first && c.index <= prev) {
      throw std::invalid_argument("cell indices must be strictly ascending");
    }
    prev = c.index;
    first = false;
    if (c.mass > 0.0) cells_[keep++] = c;
  }
  cells_.resize(keep);
}

void GridMeasure::set_frame(Frame f) {
  if (!f.empty() && (f.lo.size() != static_cast<std::size_t>(dim_) ||
                     f.hi.size() != static_cast<std::size_t>(dim_))) {
    throw std::invalid_argument("frame dimension mismatch");
  }
  frame_ = std::move(f);
}

std::uint64_t GridMeasure::axis_side(int level) const {
  if (level < 0 || level > depth_) {
    throw std::invalid_argument("level out of range");
  }
  std::uint64_t r = 1;
  for (int i = 0; i < level; ++i) r *= static_cast<std::uint64_t>(base_);
  return r;
}

double GridMeasure::total_mass() const {
  CompensatedSum s;
  for (const Cell& c : cells_) s.add(c.mass);
  return s.value();
}

double GridMeasure::mass_at(std::uint64_t index) const {
  const auto it = std::lower_bound(
      cells_.begin(), cells_.end(), index,
      [](const Cell& c, std::uint64_t v) { return c.index < v; });
  if (it == cells_.end() || it->index != index) return 0.0;
  return it->mass;
}

std::uint64_t GridMeasure::flatten(std::span<const std::uint64_t> coords) const {
  if (coords.size() != static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("coordinate count must equal dimension");
  }
  const std::uint64_t n = axis_side();
  std::uint64_t idx = 0;
  for (int a = 0; a < dim_; ++a) {
    if (coords[a] >= n) throw std::invalid_argument("coordinate out of range");
    idx = idx * n + coords[a];
  }
  return idx;
}

void GridMeasure::unflatten(std::uint64_t index,
                            std::span<std::uint64_t> coords) const {
  if (coords.size() != static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("coordinate count must equal dimension");
  }
  const std::uint64_t n = axis_side();
  for (int a = dim_ - 1; a >= 0; --a) {
    coords[a] = index % n;
    index /= n;
  }
}

std::uint64_t GridMeasure::parent_index(std::uint64_t index, int level) const {
  if (level < 0 || level > depth_) {
    throw std::invalid_argument("level out of range");
  }
  const std::uint64_t n = axis_side();
  std::uint64_t shift = 1;
  for (int i = level; i < depth_; ++i) shift *= static_cast<std::uint64_t>(base_);
  const std::uint64_t pn = n / shift;
  std::uint64_t out = 0;
  // peel coordinates least significant axis first, rebuild most significant
  std::uint64_t rebuilt[64];
  for (int a = dim_ - 1; a >= 0; --a) {
    rebuilt[a] = (index % n) / shift;
    index /= n;
  }
  for (int a = 0; a < dim_; ++a) out = out * pn + rebuilt[a];
  return out;
}

std::vector<double> GridMeasure::cell_center(std::uint64_t index) const {
  std::vector<double> x(static_cast<std::size_t>(dim_));
  cell_center(index, x);
  return x;
}

void GridMeasure::cell_center(std::uint64_t index, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("output span must have size dim");
  }
  const std::uint64_t n = axis_side();
  const double nd = static_cast<double>(n);
  for (int a = dim_ - 1; a >= 0; --a) {
    out[a] = (static_cast<double>(index % n) + 0.5) / nd;
    index /= n;
  }
  if (!frame_.empty()) {
    for (int a = 0; a < dim_; ++a) {
      out[a] = frame_.lo[a] + out[a] * (frame_.hi[a] - frame_.lo[a]);
    }
  }
}

std::vector<Cell> coarsen_cells_one_level(std::span<const Cell> cells, int base,
                                          int dim, int child_level) {
  if (child_level < 1) throw std::invalid_argument("cannot coarsen level 0");
  std::uint64_t n = 1;
  for (int i = 0; i < child_level; ++i) n *= static_cast<std::uint64_t>(base);
  const std::uint64_t pn = n / static_cast<std::uint64_t>(base);

  // (parent, mass) pairs in child order; stable sort keeps that order within
  // each parent so the per-parent compensated sums are reproducible
  std::vector<std::pair<std::uint64_t, double>> scratch;
  scratch.reserve(cells.size());
  for (const Cell& c : cells) {
    std::uint64_t idx = c.index;
    std::uint64_t parent = 0;
    std::uint64_t rebuilt[64];
    for (int a = dim - 1; a >= 0; --a) {
      rebuilt[a] = (idx % n) / static_cast<std::uint64_t>(base);
      idx /= n;
    }
    for (int a = 0; a < dim; ++a) parent = parent * pn + rebuilt[a];
    scratch.emplace_back(parent, c.mass);
  }
  std::stable_sort(scratch.begin(), scratch.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<Cell> out;
  out.reserve(scratch.size() / 2 + 1);
  std::size_t i = 0;
  while (i < scratch.size()) {
    const std::uint64_t parent = scratch[i].first;
    CompensatedSum s;
    while (i < scratch.size() && scratch[i].first == parent) {
      s.add(scratch[i].second);
      ++i;
    }
    out.push_back(Cell{parent, s.value()});
  }
  return out;
}

GridMeasure coarsen(const GridMeasure& m, int level) {
  if (level < 0 || level > m.depth()) {
    throw std::invalid_argument("coarsen level out of range");
  }
  std::vector<Cell> cur(m.cells().begin(), m.cells().end());
  for (int j = m.depth(); j > level; --j) {
    cur = coarsen_cells_one_level(cur, m.base(), m.dim(), j);
  }
  GridMeasure out(m.base(), m.dim(), level, std::move(cur));
  out.set_frame(m.frame());
  return out;
}

// ---- serialization ---------------------------------------------------------

void save_measure(const GridMeasure& m, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  os << "MMF1 " << m.base() << ' ' << m.dim() << ' ' << m.depth() << ' '
     << m.cells().size() << '\n';
  char buf[64];
  for (const Cell& c : m.cells()) {
    std::snprintf(buf, sizeof buf, "%" PRIu64 " %.17g", c.index, c.mass);
    os << buf << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

GridMeasure load_measure(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open for reading: " + path.string());
  }
  std::string magic;
  long long base = 0, dim = 0, depth = 0, count = -1;
  if (!(is >> magic >> base >> dim >> depth >> count) || magic != "MMF1") {
    throw std::runtime_error("malformed header in " + path.string());
  }
  if (base < 2 || dim < 1 || depth < 0 || count < 0) {
    throw std::runtime_error("malformed header values in " + path.string());
  }
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    std::uint64_t index = 0;
    double mass = 0.0;
    if (!(is >> index >> mass)) {
      std::ostringstream msg;
      msg << path.string() << ": expected " << count << " cells, got " << i;
      throw std::runtime_error(msg.str());
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      std::ostringstream msg;
      msg << path.string() << ": cell " << i << " has non-positive mass";
      throw std::runtime_error(msg.str());
    }
    if (i > 0 && index <= cells.back().index) {
      std::ostringstream msg;
      msg << path.string() << ": cell indices not ascending at record " << i;
      throw std::runtime_error(msg.str());
    }
    cells.push_back(Cell{index, mass});
  }
  std::uint64_t trailing = 0;
  if (is >> trailing) {
    throw std::runtime_error(path.string() + ": trailing data after cells");
  }
  GridMeasure m = [&] {
    try {
      return GridMeasure(static_cast<int>(base), static_cast<int>(dim),
                         static_cast<int>(depth), std::move(cells));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path.string() + ": " + e.what());
    }
  }();
  const double total = m.total_mass();
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << path.string() << ": total mass " << total << " violates 1 +- 1e-9";
    throw std::runtime_error(msg.str());
  }
  return m;
}

}  // namespace mmf
