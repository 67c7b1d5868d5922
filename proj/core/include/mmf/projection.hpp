#pragma once
// Haar-random subspaces, pushforward of atom clouds under orthogonal
// projection, and regridding of projected clouds for re-analysis.

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "mmf/grid_measure.hpp"
#include "mmf/point_cloud.hpp"

namespace mmf {

// Orthonormal basis of an m-dimensional subspace of R^n, stored row-major
// (basis[i*n .. i*n+n) is the i-th basis vector).
struct Subspace {
  int n = 0;
  int m = 0;
  std::vector<double> basis;

  [[nodiscard]] const double* vec(int i) const {
    return basis.data() + static_cast<std::size_t>(i) * n;
  }
};

// max_{i,j} |<v_i, v_j> - delta_ij|
[[nodiscard]] double orthonormality_residual(const Subspace& V);

// Haar-distributed subspace: an n x m standard-normal draw from the seeded
// deterministic generator (stream = sample index), orthonormalized by
// modified Gram-Schmidt. Requires 0 < m <= n (m = n only serves the identity
// test path). A numerically collapsed draw is redrawn on the next substream,
// at most 16 attempts, then std::runtime_error.
[[nodiscard]] Subspace sample_grassmann(int n, int m, std::uint64_t seed,
                                        std::uint64_t sample_index = 0);

// The m = n identity basis (projection is then the identity map).
[[nodiscard]] Subspace identity_subspace(int n);

// Text export, one line `v_i = (c_0, c_1, ...)` per basis vector with 17
// significant digits; load accepts exactly that shape back.
void save_subspace(const Subspace& V, const std::filesystem::path& path);
[[nodiscard]] Subspace load_subspace(const std::filesystem::path& path);

// Basis coordinates of every atom (dot products); weights are untouched.
[[nodiscard]] PointCloud project_cloud(const PointCloud& pc, const Subspace& V);

// Per-axis bounds of a cloud, widened by half a cell-diameter-equivalent on
// any axis whose extent collapses to zero.
[[nodiscard]] std::pair<std::vector<double>, std::vector<double>> cloud_bounds(
    const PointCloud& pc);

// Accumulates atom weights into the cells of a fresh base^depth grid over the
// given box. An atom exactly on a cell edge goes to the lower-index cell; an
// atom outside the box is an error. The box is recorded as the result's frame
// (dimension estimates are invariant to the affine rescale).
[[nodiscard]] GridMeasure regrid(const PointCloud& pc, int base, int depth,
                                 const std::vector<double>& lo,
                                 const std::vector<double>& hi);

// grid_to_cloud -> project_cloud -> regrid for both measures, with a single
// shared bounding box so the projected pair keeps a common support. Equals the
// literal composition of those three calls, but streams cells instead of
// materializing the full clouds.
[[nodiscard]] std::pair<GridMeasure, GridMeasure> project_pair(
    const GridMeasure& mu, const GridMeasure& nu, const Subspace& V, int base,
    int depth);

}  // namespace mmf
