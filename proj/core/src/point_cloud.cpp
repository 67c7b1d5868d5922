#include "mmf/point_cloud.hpp"

#include <span>

namespace mmf {

PointCloud grid_to_cloud(const GridMeasure& m) {
  PointCloud pc;
  pc.dim = m.dim();
  const std::size_t n = m.cell_count();
  const std::size_t d = static_cast<std::size_t>(pc.dim);
  pc.positions.resize(n * d);
  pc.weights.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const Cell& c = m.cells()[a];
    m.cell_center(c.index, std::span<double>(pc.positions.data() + a * d, d));
    pc.weights[a] = c.mass;
  }
  return pc;
}

}  // namespace mmf
