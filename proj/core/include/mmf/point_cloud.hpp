#pragma once
// Weighted atom clouds: the intermediate representation between a grid
// measure and its image under a linear projection.

#include <cstddef>
#include <vector>

#include "mmf/grid_measure.hpp"

namespace mmf {

// Atom positions are stored flat (atom a occupies positions[a*dim .. a*dim+dim)).
struct PointCloud {
  int dim = 0;
  std::vector<double> positions;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
  [[nodiscard]] const double* position(std::size_t a) const {
    return positions.data() + a * static_cast<std::size_t>(dim);
  }
};

// One atom per stored cell, placed at the cell center (in the measure's frame
// when one is set, else in the unit cube), weight equal to the cell mass.
// Atom order follows cell order, so the cloud is deterministic.
[[nodiscard]] PointCloud grid_to_cloud(const GridMeasure& m);

}  // namespace mmf
