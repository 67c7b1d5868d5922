#pragma once
// Measure-pair construction: self-similar branch specs, exact multinomial
// cascades on b-adic grids, products, and the named pair families exposed by
// the command line and the verification suites.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmf/grid_measure.hpp"

namespace mmf {

// One spec carries both branch-probability vectors (p for the first measure,
// w for the second) over a shared geometry, so that the generated pair always
// has matching supports when the zero patterns of p and w match.
struct SelfSimilarSpec {
  std::vector<double> p;                      // first-measure probabilities
  std::vector<double> w;                      // second-measure probabilities
  std::vector<double> ratios;                 // contraction ratio per branch
  std::vector<std::vector<double>> offsets;   // placement corner per branch

  [[nodiscard]] std::size_t branch_count() const { return p.size(); }
  [[nodiscard]] int dim() const {
    return offsets.empty() ? 0 : static_cast<int>(offsets.front().size());
  }
};

// Throws std::invalid_argument unless: k >= 2; p and w are probability vectors
// (sum 1 within 1e-12, entries >= 0); ratios in (0,1); offsets consistent in
// dimension; branch boxes offset_i + [0, c_i]^dim have pairwise disjoint
// interiors. Zero entries are allowed (they shrink the support).
void validate_spec(const SelfSimilarSpec& spec);

// Returns b >= 2 when every ratio equals 1/b for one integer b and every
// offset component is an exact multiple of 1/b (tolerance 1e-12); returns 0
// otherwise. Only b-adic specs can be rendered to a grid exactly.
[[nodiscard]] int badic_base(const SelfSimilarSpec& spec);

enum class Component { First, Second };

// Exact depth-L multinomial measure for a b-adic spec: the cell reached by
// the digit string (d_1..d_L) carries mass prod_j p_{d_j} (or prod_j w_{d_j}).
// Masses are plain products unless depth * |log p_min| > 650, in which case
// they are accumulated in log space and exponentiated once at the end
// (deep cascades underflow the naive product before the final value does not).
// Throws std::invalid_argument for non-b-adic specs or when base^(dim*depth)
// overflows the cell index space.
[[nodiscard]] GridMeasure multinomial_cascade(const SelfSimilarSpec& spec,
                                              Component which, int depth);

// Product measure on the concatenated axes: mass of cell (u,v) is a(u)*b(v).
// Requires equal base and depth. Cell order of the result is ascending by
// construction (outer loop over a, inner over b).
[[nodiscard]] GridMeasure product_measure(const GridMeasure& a,
                                          const GridMeasure& b);

struct MeasurePair {
  GridMeasure mu;
  GridMeasure nu;
};

// Named families:
//   "binomial-pair"     1-D base-2 pair; defaults p=(0.7,0.3), w=(0.5,0.5)
//   "uniform-pair"      1-D base-2 uniform/uniform
//   "product-binomial"  planar pair (p (x) p, w (x) w) on base 2, 4 branches
//   "product-uniform"   planar uniform pair
// p/w override the 1-D defaults (product families take the outer product of
// the overrides). Presets reject mismatched zero patterns between p and w so
// generated pairs always share their support. Branches are ordered by placement
// so repeated generation is reproducible.
[[nodiscard]] SelfSimilarSpec preset_spec(std::string_view name,
                                          std::span<const double> p = {},
                                          std::span<const double> w = {});
[[nodiscard]] std::vector<std::string> preset_names();

// Renders both components of the spec at the requested depth.
[[nodiscard]] MeasurePair preset_pair(const SelfSimilarSpec& spec, int depth);

}  // namespace mmf
