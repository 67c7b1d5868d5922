#pragma once
// Ground truth against which the estimators are tested: closed-form dimension
// functions of self-similar pairs, and exhaustive optimization of the
// covering/packing pre-measures on small 1-D b-adic systems.

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "mmf/generators.hpp"
#include "mmf/grid_measure.hpp"

namespace mmf {

// The unique beta solving sum_i p_i^q w_i^t c_i^beta = 1, where p comes from
// spec_mu and w from spec_nu (both specs must share branch count, ratios, and
// offsets). Equal ratios 1/b short-circuit to the closed form
// log_b sum_i p_i^q w_i^t; otherwise bisection on beta (left side strictly
// decreasing), bracket [-64, 64] grown geometrically from [-8, 8], residual
// < 1e-12, 200 iteration cap. Throws std::invalid_argument for a degenerate
// branch (p_i^q w_i^t undefined or zero with q or t <= 0) and
// std::runtime_error when no bracket exists.
[[nodiscard]] double analytic_tau(const SelfSimilarSpec& spec_mu,
                                  const SelfSimilarSpec& spec_nu, double q,
                                  double t);
[[nodiscard]] double analytic_tau(const SelfSimilarSpec& spec, double q,
                                  double t);

// (-dB/dq, -dB/dt) by implicit differentiation of the auxiliary equation:
// with m_i = p_i^q w_i^t c_i^beta at the solved beta,
//   alpha = (sum m_i ln p_i)/(sum m_i ln c_i),
//   beta  = (sum m_i ln w_i)/(sum m_i ln c_i).
[[nodiscard]] std::pair<double, double> analytic_gradient(
    const SelfSimilarSpec& spec_mu, const SelfSimilarSpec& spec_nu, double q,
    double t);
[[nodiscard]] std::pair<double, double> analytic_gradient(
    const SelfSimilarSpec& spec, double q, double t);

enum class PremeasureMode { Covering, Packing };

// Result of one exhaustive optimization: the optimal value and the cell
// family attaining it (cells as (level, index) pairs).
struct PremeasureResult {
  double value = 0.0;
  std::vector<std::pair<int, std::uint64_t>> family;
  std::uint64_t families_enumerated = 0;
};

// Exhaustive optimum of sum_Q mu(Q)^q nu(Q)^t |Q|^s over families of b-adic
// cells of depth >= j drawn from the joint-support tree (1-D only, depth <= 4
// recommended). Packing maximizes over families of pairwise disjoint charged
// cells; covering minimizes over families whose union covers the joint
// support. |Q| is the cell side base^{-level}. The family count is estimated
// first and instances beyond 10^6 families are rejected with the size in the
// message.
[[nodiscard]] PremeasureResult brute_force_premeasure(const GridMeasure& mu,
                                                      const GridMeasure& nu,
                                                      double q, double t,
                                                      double s, int j,
                                                      PremeasureMode mode);

// Critical-exponent trend over depths: for each j in j_list, bisects on s
// for the point where the optimal family value crosses 1 (the value is
// strictly decreasing in s, so the crossing is unique). For exactly geometric
// pairs the crossing sits at the same s for every j; the trend over j is the
// discrete stand-in for shrinking scale.
struct CriticalTrend {
  std::vector<int> levels;
  std::vector<double> exponents;
};

[[nodiscard]] CriticalTrend brute_force_critical_s(const GridMeasure& mu,
                                                   const GridMeasure& nu,
                                                   double q, double t,
                                                   const std::vector<int>& j_list,
                                                   PremeasureMode mode);

// CSV export of analytic values over a (q,t) grid: header q,t,beta_analytic,
// row-major with q as the outer index, 12 significant digits.
void save_oracle_csv(const SelfSimilarSpec& spec_mu,
                     const SelfSimilarSpec& spec_nu,
                     const std::vector<double>& q_grid,
                     const std::vector<double>& t_grid,
                     const std::filesystem::path& path);

}  // namespace mmf
