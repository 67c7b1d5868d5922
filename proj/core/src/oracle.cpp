#include "mmf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "mmf/numeric.hpp"

namespace mmf {

namespace {

constexpr double kRatioTol = 1e-12;
constexpr std::uint64_t kFamilyCap = 1000000;

// Branch terms of the auxiliary equation sum_i coef_i * c_i^beta = 1 with
// coef_i = p_i^q w_i^t. Zero branches are dropped when both exponents are
// positive and rejected otherwise (0^negative diverges, 0^0 is undefined).
struct TermSystem {
  std::vector<double> coef;
  std::vector<double> ln_p;
  std::vector<double> ln_w;
  std::vector<double> ln_c;
  std::vector<double> ratio;
  bool equal_ratios = true;
};

TermSystem build_terms(const SelfSimilarSpec& spec_mu,
                       const SelfSimilarSpec& spec_nu, double q, double t) {
  validate_spec(spec_mu);
  validate_spec(spec_nu);
  if (spec_mu.branch_count() != spec_nu.branch_count() ||
      spec_mu.dim() != spec_nu.dim()) {
    throw std::invalid_argument("specs do not share a branch geometry");
  }
  for (std::size_t i = 0; i < spec_mu.ratios.size(); ++i) {
    if (std::abs(spec_mu.ratios[i] - spec_nu.ratios[i]) > kRatioTol) {
      throw std::invalid_argument("specs do not share contraction ratios");
    }
  }
  for (std::size_t i = 0; i < spec_mu.offsets.size(); ++i) {
    for (std::size_t a = 0; a < spec_mu.offsets[i].size(); ++a) {
      if (std::abs(spec_mu.offsets[i][a] - spec_nu.offsets[i][a]) > kRatioTol) {
        throw std::invalid_argument("specs do not share branch offsets");
      }
    }
  }
  if (!std::isfinite(q) || !std::isfinite(t)) {
    throw std::invalid_argument("exponents must be finite");
  }

  TermSystem sys;
  const std::size_t k = spec_mu.branch_count();
  for (std::size_t i = 0; i < k; ++i) {
    const double p = spec_mu.p[i];
    const double w = spec_nu.w[i];
    if ((p == 0.0 && q <= 0.0) || (w == 0.0 && t <= 0.0)) {
      throw std::invalid_argument(
          "degenerate branch: zero branch weight with a nonpositive exponent");
    }
    if (p == 0.0 || w == 0.0) continue;  // vanishing term, q and t positive
    sys.coef.push_back(std::pow(p, q) * std::pow(w, t));
    sys.ln_p.push_back(std::log(p));
    sys.ln_w.push_back(std::log(w));
    sys.ln_c.push_back(std::log(spec_mu.ratios[i]));
    sys.ratio.push_back(spec_mu.ratios[i]);
  }
  if (sys.coef.empty()) {
    throw std::invalid_argument("no jointly charged branch");
  }
  for (double c : sys.ratio) {
    if (std::abs(c - sys.ratio.front()) > kRatioTol) {
      sys.equal_ratios = false;
      break;
    }
  }
  return sys;
}

// sum_i coef_i c_i^beta - 1, strictly decreasing in beta
double equation_residual(const TermSystem& sys, double beta) {
  CompensatedSum s;
  for (std::size_t i = 0; i < sys.coef.size(); ++i) {
    s.add(sys.coef[i] * std::exp(beta * sys.ln_c[i]));
  }
  return s.value() - 1.0;
}

double solve_beta(const TermSystem& sys) {
  if (sys.equal_ratios) {
    CompensatedSum s;
    for (double c : sys.coef) s.add(c);
    return std::log(s.value()) / std::log(1.0 / sys.ratio.front());
  }
  double lo = -8.0;
  double hi = 8.0;
  while (equation_residual(sys, lo) < 0.0) {
    lo *= 2.0;
    if (lo < -64.0) {
      throw std::runtime_error("no bracket for the dimension equation");
    }
  }
  while (equation_residual(sys, hi) > 0.0) {
    hi *= 2.0;
    if (hi > 64.0) {
      throw std::runtime_error("no bracket for the dimension equation");
    }
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double r = equation_residual(sys, mid);
    if (std::abs(r) < 1e-12) return mid;
    if (r > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

// ---- exhaustive pre-measure optimization ------------------------------------

struct TreeNode {
  int level = 0;
  std::uint64_t index = 0;
  double mass_mu = 0.0;
  double mass_nu = 0.0;
  std::size_t subtree = 1;  // preorder size including self
};

// Ancestors (levels j..L) of the jointly charged finest cells, in preorder.
// Cells charged by both measures at their own level but with divergent
// supports below carry no point of the joint support, so they are not
// admissible packing or covering cells and stay out of the tree.
struct BruteTree {
  int base = 2;
  int j = 0;
  int L = 0;
  std::vector<TreeNode> nodes;
};

constexpr std::uint64_t kCountCap = std::uint64_t{1} << 62;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > kCountCap / b) return kCountCap;
  return a * b;
}

// families in the subtree at pos (including the empty choice for packing);
// returns {count, position after the subtree}
std::pair<std::uint64_t, std::size_t> count_families(const BruteTree& tree,
                                                     std::size_t pos,
                                                     PremeasureMode mode) {
  const TreeNode& nd = tree.nodes[pos];
  if (nd.level == tree.L) {
    return {mode == PremeasureMode::Packing ? 2u : 1u, pos + 1};
  }
  std::uint64_t prod = 1;
  std::size_t p = pos + 1;
  const std::size_t end = pos + nd.subtree;
  while (p < end) {
    const auto [c, next] = count_families(tree, p, mode);
    prod = sat_mul(prod, c);
    p = next;
  }
  return {prod >= kCountCap ? prod : prod + 1, end};
}

std::uint64_t total_families(const BruteTree& tree, PremeasureMode mode) {
  std::uint64_t total = 1;
  std::size_t pos = 0;
  while (pos < tree.nodes.size()) {
    const auto [c, next] = count_families(tree, pos, mode);
    total = sat_mul(total, c);
    pos = next;
  }
  return total;
}

BruteTree build_tree(const GridMeasure& mu, const GridMeasure& nu, int j) {
  if (mu.base() != nu.base() || mu.dim() != nu.dim() ||
      mu.depth() != nu.depth()) {
    throw std::invalid_argument("measures live on different grids");
  }
  if (mu.dim() != 1) {
    throw std::invalid_argument("the exhaustive optimizer handles 1-D only");
  }
  const int L = mu.depth();
  if (j < 0 || j > L) {
    throw std::invalid_argument("coarsest level out of range");
  }

  BruteTree tree;
  tree.base = mu.base();
  tree.j = j;
  tree.L = L;

  const int levels = L - j + 1;
  std::vector<std::vector<Cell>> mu_chain(levels);
  std::vector<std::vector<Cell>> nu_chain(levels);
  mu_chain[levels - 1] = mu.cells();
  nu_chain[levels - 1] = nu.cells();
  for (int l = L - 1; l >= j; --l) {
    mu_chain[l - j] =
        coarsen_cells_one_level(mu_chain[l - j + 1], tree.base, 1, l + 1);
    nu_chain[l - j] =
        coarsen_cells_one_level(nu_chain[l - j + 1], tree.base, 1, l + 1);
  }

  // joint indices per level, seeded at the finest level and lifted by parent
  std::vector<std::vector<std::uint64_t>> joint(levels);
  {
    const auto& a = mu_chain[levels - 1];
    const auto& b = nu_chain[levels - 1];
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
      if (a[ia].index < b[ib].index) {
        ++ia;
      } else if (b[ib].index < a[ia].index) {
        ++ib;
      } else {
        joint[levels - 1].push_back(a[ia].index);
        ++ia;
        ++ib;
      }
    }
  }
  if (joint[levels - 1].empty()) {
    throw std::invalid_argument("empty joint support; the pair must share support");
  }
  for (int l = L - 1; l >= j; --l) {
    auto& up = joint[l - j];
    for (std::uint64_t idx : joint[l - j + 1]) {
      const std::uint64_t parent = idx / static_cast<std::uint64_t>(tree.base);
      if (up.empty() || up.back() != parent) up.push_back(parent);
    }
  }

  const auto mass_in = [](const std::vector<Cell>& cells, std::uint64_t idx) {
    const auto it = std::lower_bound(
        cells.begin(), cells.end(), idx,
        [](const Cell& c, std::uint64_t v) { return c.index < v; });
    // every tree index is charged by construction
    return it->mass;
  };

  // preorder emission
  const auto emit = [&](const auto& self, int level, std::uint64_t index) -> void {
    const std::size_t pos = tree.nodes.size();
    TreeNode nd;
    nd.level = level;
    nd.index = index;
    nd.mass_mu = mass_in(mu_chain[level - j], index);
    nd.mass_nu = mass_in(nu_chain[level - j], index);
    tree.nodes.push_back(nd);
    if (level < L) {
      const auto& next = joint[level - j + 1];
      const std::uint64_t first = index * static_cast<std::uint64_t>(tree.base);
      const std::uint64_t last = first + static_cast<std::uint64_t>(tree.base);
      auto it = std::lower_bound(next.begin(), next.end(), first);
      while (it != next.end() && *it < last) {
        self(self, level + 1, *it);
        ++it;
      }
    }
    tree.nodes[pos].subtree = tree.nodes.size() - pos;
  };
  for (std::uint64_t root : joint[0]) emit(emit, j, root);
  return tree;
}

// One full enumeration at fixed weights. Covering families are enumerated in
// their non-redundant form (a cell is either taken or replaced by an exact
// cover of its children); redundant covers only add positive weight, so the
// minimum is unaffected.
struct Walker {
  const BruteTree* tree = nullptr;
  const std::vector<double>* weights = nullptr;
  PremeasureMode mode = PremeasureMode::Packing;
  double best = 0.0;
  bool have_best = false;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best_positions;
  std::uint64_t enumerated = 0;

  void consider(double value) {
    ++enumerated;
    const bool better =
        !have_best || (mode == PremeasureMode::Packing ? value > best
                                                       : value < best);
    if (better) {
      best = value;
      have_best = true;
      best_positions = current;
    }
  }

  void walk(std::size_t pos, double value) {
    if (pos == tree->nodes.size()) {
      consider(value);
      return;
    }
    const TreeNode& nd = tree->nodes[pos];
    current.push_back(pos);
    walk(pos + nd.subtree, value + (*weights)[pos]);
    current.pop_back();
    if (nd.level == tree->L && mode == PremeasureMode::Covering) {
      return;  // a cover must reach every finest joint cell
    }
    walk(pos + 1, value);
  }
};

std::vector<double> node_weights(const BruteTree& tree, double q, double t,
                                 double s) {
  std::vector<double> w(tree.nodes.size());
  std::vector<double> side_pow(tree.L + 1, 1.0);
  for (int l = tree.j; l <= tree.L; ++l) {
    side_pow[l] = std::pow(std::pow(static_cast<double>(tree.base), -l), s);
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const TreeNode& nd = tree.nodes[i];
    w[i] = std::pow(nd.mass_mu, q) * std::pow(nd.mass_nu, t) *
           side_pow[nd.level];
    if (!std::isfinite(w[i])) {
      throw std::invalid_argument(
          "non-finite family term; exponents too extreme for this pair");
    }
  }
  return w;
}

PremeasureResult optimize_tree(const BruteTree& tree, double q, double t,
                               double s, PremeasureMode mode) {
  const std::uint64_t count = total_families(tree, mode);
  if (count > kFamilyCap) {
    throw std::invalid_argument(
        "exhaustive enumeration rejected: " + std::to_string(count) +
        " families exceed the cap of " + std::to_string(kFamilyCap));
  }
  const std::vector<double> weights = node_weights(tree, q, t, s);
  Walker walker;
  walker.tree = &tree;
  walker.weights = &weights;
  walker.mode = mode;
  walker.walk(0, 0.0);
  PremeasureResult result;
  result.value = walker.best;
  result.families_enumerated = walker.enumerated;
  for (std::size_t pos : walker.best_positions) {
    result.family.emplace_back(tree.nodes[pos].level, tree.nodes[pos].index);
  }
  return result;
}

}  // namespace

double analytic_tau(const SelfSimilarSpec& spec_mu,
                    const SelfSimilarSpec& spec_nu, double q, double t) {
  return solve_beta(build_terms(spec_mu, spec_nu, q, t));
}

double analytic_tau(const SelfSimilarSpec& spec, double q, double t) {
  return analytic_tau(spec, spec, q, t);
}

std::pair<double, double> analytic_gradient(const SelfSimilarSpec& spec_mu,
                                            const SelfSimilarSpec& spec_nu,
                                            double q, double t) {
  const TermSystem sys = build_terms(spec_mu, spec_nu, q, t);
  const double beta = solve_beta(sys);
  CompensatedSum sum_p, sum_w, sum_c;
  for (std::size_t i = 0; i < sys.coef.size(); ++i) {
    const double m = sys.coef[i] * std::exp(beta * sys.ln_c[i]);
    sum_p.add(m * sys.ln_p[i]);
    sum_w.add(m * sys.ln_w[i]);
    sum_c.add(m * sys.ln_c[i]);
  }
  return {sum_p.value() / sum_c.value(), sum_w.value() / sum_c.value()};
}

std::pair<double, double> analytic_gradient(const SelfSimilarSpec& spec,
                                            double q, double t) {
  return analytic_gradient(spec, spec, q, t);
}

PremeasureResult brute_force_premeasure(const GridMeasure& mu,
                                        const GridMeasure& nu, double q,
                                        double t, double s, int j,
                                        PremeasureMode mode) {
  const BruteTree tree = build_tree(mu, nu, j);
  return optimize_tree(tree, q, t, s, mode);
}

CriticalTrend brute_force_critical_s(const GridMeasure& mu,
                                     const GridMeasure& nu, double q, double t,
                                     const std::vector<int>& j_list,
                                     PremeasureMode mode) {
  CriticalTrend trend;
  for (int j : j_list) {
    if (j < 1) {
      throw std::invalid_argument(
          "critical-exponent trend needs levels >= 1 (the level-0 cell has "
          "unit side, so its family value ignores s)");
    }
    const BruteTree tree = build_tree(mu, nu, j);
    const auto value_at = [&](double s) {
      return optimize_tree(tree, q, t, s, mode).value;
    };
    double lo = -8.0;
    double hi = 8.0;
    while (value_at(lo) <= 1.0) {
      lo *= 2.0;
      if (lo < -64.0) {
        throw std::runtime_error("no bracket for the critical exponent");
      }
    }
    while (value_at(hi) >= 1.0) {
      hi *= 2.0;
      if (hi > 64.0) {
        throw std::runtime_error("no bracket for the critical exponent");
      }
    }
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      const double v = value_at(mid);
      if (v > 1.0) {
        lo = mid;
      } else if (v < 1.0) {
        hi = mid;
      } else {
        lo = hi = mid;
      }
    }
    trend.levels.push_back(j);
    trend.exponents.push_back(0.5 * (lo + hi));
  }
  return trend;
}

void save_oracle_csv(const SelfSimilarSpec& spec_mu,
                     const SelfSimilarSpec& spec_nu,
                     const std::vector<double>& q_grid,
                     const std::vector<double>& t_grid,
                     const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  os << "q,t,beta_analytic\n";
  char buf[128];
  for (double q : q_grid) {
    for (double t : t_grid) {
      const double beta = analytic_tau(spec_mu, spec_nu, q, t);
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", q, t, beta);
      os << buf;
    }
  }
  if (!os) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

}  // namespace mmf
