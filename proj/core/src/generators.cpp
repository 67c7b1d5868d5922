#include "mmf/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mmf/numeric.hpp"

namespace mmf {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kGeomTol = 1e-12;
// Hard cap on generated cells; past this the request cannot fit in memory.
constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 27;

void check_probability_vector(const std::vector<double>& v, const char* name) {
  CompensatedSum s;
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument(std::string(name) +
                                  " entries must be finite and >= 0");
    }
    s.add(x);
  }
  if (std::abs(s.value() - 1.0) > kSumTol) {
    std::ostringstream msg;
    msg << name << " must sum to 1 within 1e-12 (got " << s.value() << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

void validate_spec(const SelfSimilarSpec& spec) {
  const std::size_t k = spec.p.size();
  if (k < 2) throw std::invalid_argument("spec needs at least 2 branches");
  if (spec.w.size() != k || spec.ratios.size() != k ||
      spec.offsets.size() != k) {
    throw std::invalid_argument("spec field lengths must all equal the branch count");
  }
  check_probability_vector(spec.p, "p");
  check_probability_vector(spec.w, "w");
  const std::size_t n = spec.offsets.front().size();
  if (n < 1) throw std::invalid_argument("offsets must have dimension >= 1");
  for (std::size_t i = 0; i < k; ++i) {
    const double c = spec.ratios[i];
    if (!(c > 0.0) || !(c < 1.0)) {
      throw std::invalid_argument("ratios must lie in (0,1)");
    }
    if (spec.offsets[i].size() != n) {
      throw std::invalid_argument("offsets must share one dimension");
    }
    for (double o : spec.offsets[i]) {
      if (!std::isfinite(o) || o < -kGeomTol || o + c > 1.0 + kGeomTol) {
        throw std::invalid_argument("branch boxes must sit inside [0,1]^dim");
      }
    }
  }
  // open set condition on the chosen boxes: some axis separates each pair
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      bool separated = false;
      for (std::size_t a = 0; a < n && !separated; ++a) {
        separated = spec.offsets[i][a] + spec.ratios[i] <=
                        spec.offsets[j][a] + kGeomTol ||
                    spec.offsets[j][a] + spec.ratios[j] <=
                        spec.offsets[i][a] + kGeomTol;
      }
      if (!separated) {
        std::ostringstream msg;
        msg << "branches " << i << " and " << j << " overlap";
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

int badic_base(const SelfSimilarSpec& spec) {
  if (spec.ratios.empty()) return 0;
  const double inv = 1.0 / spec.ratios.front();
  const double rounded = std::round(inv);
  if (rounded < 2.0 || std::abs(inv - rounded) > 1e-9) return 0;
  const int base = static_cast<int>(rounded);
  for (double c : spec.ratios) {
    if (std::abs(c - 1.0 / base) > kGeomTol) return 0;
  }
  for (const auto& off : spec.offsets) {
    for (double o : off) {
      const double scaled = o * base;
      const double digit = std::round(scaled);
      if (std::abs(scaled - digit) > 1e-9 || digit < 0.0 || digit >= base) {
        return 0;
      }
    }
  }
  return base;
}

GridMeasure multinomial_cascade(const SelfSimilarSpec& spec, Component which,
                                int depth) {
  validate_spec(spec);
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  const int base = badic_base(spec);
  if (base == 0) {
    throw std::invalid_argument(
        "spec is not b-adic: exact grid rendering needs all ratios equal to "
        "1/base and offsets on the base-grid; use the analytic oracle for "
        "general ratios");
  }
  const int n = spec.dim();
  if (static_cast<double>(n) * depth * std::log2(double(base)) > 62.0) {
    throw std::invalid_argument("base^(dim*depth) overflows the cell index space");
  }

  const std::vector<double>& prob = which == Component::First ? spec.p : spec.w;

  // active branches with their per-axis digits
  struct Branch {
    std::vector<std::uint64_t> digit;
    double mass;
    double log_mass;
  };
  std::vector<Branch> branches;
  double min_mass = 1.0;
  for (std::size_t i = 0; i < spec.branch_count(); ++i) {
    if (prob[i] <= 0.0) continue;  // absent subtree, support shrinks
    Branch b;
    b.digit.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
      b.digit[static_cast<std::size_t>(a)] = static_cast<std::uint64_t>(
          std::llround(spec.offsets[i][static_cast<std::size_t>(a)] * base));
    }
    b.mass = prob[i];
    b.log_mass = std::log(prob[i]);
    min_mass = std::min(min_mass, prob[i]);
    branches.push_back(std::move(b));
  }
  if (branches.empty()) {
    throw std::invalid_argument("all branches have zero mass");
  }

  double cell_estimate = 1.0;
  for (int j = 0; j < depth; ++j) cell_estimate *= double(branches.size());
  if (cell_estimate > double(kMaxCells)) {
    std::ostringstream msg;
    msg << "cascade would produce ~" << cell_estimate << " cells (cap "
        << kMaxCells << ")";
    throw std::invalid_argument(msg.str());
  }

  const bool log_space = depth * std::abs(std::log(min_mass)) > 650.0;

  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(cell_estimate));

  // depth-first expansion over digit strings; running per-axis coordinates
  std::vector<std::uint64_t> coords(static_cast<std::size_t>(n), 0);
  std::uint64_t side = 1;
  for (int j = 0; j < depth; ++j) side *= static_cast<std::uint64_t>(base);

  auto emit = [&](const std::vector<std::uint64_t>& c, double acc) {
    std::uint64_t idx = 0;
    for (int a = 0; a < n; ++a) idx = idx * side + c[static_cast<std::size_t>(a)];
    const double mass = log_space ? std::exp(acc) : acc;
    if (mass > 0.0) cells.push_back(Cell{idx, mass});
  };

  auto descend = [&](auto&& self, int level, double acc) -> void {
    if (level == depth) {
      emit(coords, acc);
      return;
    }
    for (const Branch& b : branches) {
      for (int a = 0; a < n; ++a) {
        auto& c = coords[static_cast<std::size_t>(a)];
        c = c * base + b.digit[static_cast<std::size_t>(a)];
      }
      self(self, level + 1, log_space ? acc + b.log_mass : acc * b.mass);
      for (int a = 0; a < n; ++a) {
        auto& c = coords[static_cast<std::size_t>(a)];
        c = (c - b.digit[static_cast<std::size_t>(a)]) / base;
      }
    }
  };
  descend(descend, 0, log_space ? 0.0 : 1.0);

  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return a.index < b.index; });
  return GridMeasure(base, n, depth, std::move(cells));
}

GridMeasure product_measure(const GridMeasure& a, const GridMeasure& b) {
  if (a.base() != b.base()) {
    throw std::invalid_argument("product factors must share the base");
  }
  if (a.depth() != b.depth()) {
    throw std::invalid_argument("product factors must share the depth");
  }
  const int n = a.dim() + b.dim();
  if (static_cast<double>(n) * a.depth() * std::log2(double(a.base())) > 62.0) {
    throw std::invalid_argument("product index space overflows");
  }
  const std::uint64_t count =
      static_cast<std::uint64_t>(a.cell_count()) * b.cell_count();
  if (count > kMaxCells) {
    std::ostringstream msg;
    msg << "product would hold " << count << " cells (cap " << kMaxCells << ")";
    throw std::invalid_argument(msg.str());
  }

  std::uint64_t b_span = 1;  // base^(b.dim * depth)
  for (int i = 0; i < b.dim() * b.depth(); ++i) {
    b_span *= static_cast<std::uint64_t>(b.base());
  }

  std::vector<Cell> cells;
  cells.reserve(count);
  for (const Cell& u : a.cells()) {
    for (const Cell& v : b.cells()) {
      cells.push_back(Cell{u.index * b_span + v.index, u.mass * v.mass});
    }
  }
  return GridMeasure(a.base(), n, a.depth(), std::move(cells));
}

namespace {

SelfSimilarSpec line_spec(std::vector<double> p, std::vector<double> w) {
  const std::size_t k = p.size();
  SelfSimilarSpec spec;
  spec.p = std::move(p);
  spec.w = std::move(w);
  spec.ratios.assign(k, 1.0 / double(k));
  for (std::size_t i = 0; i < k; ++i) {
    spec.offsets.push_back({double(i) / double(k)});
  }
  return spec;
}

SelfSimilarSpec planar_spec(const std::vector<double>& p,
                            const std::vector<double>& w) {
  const std::size_t k = p.size();
  SelfSimilarSpec spec;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      spec.p.push_back(p[i] * p[j]);
      spec.w.push_back(w[i] * w[j]);
      spec.ratios.push_back(1.0 / double(k));
      spec.offsets.push_back({double(i) / double(k), double(j) / double(k)});
    }
  }
  return spec;
}

void check_zero_patterns(const std::vector<double>& p,
                         const std::vector<double>& w) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if ((p[i] == 0.0) != (w[i] == 0.0)) {
      throw std::invalid_argument(
          "mismatched zero patterns between p and w would break support "
          "equality of the pair");
    }
  }
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"binomial-pair", "uniform-pair", "product-binomial",
          "product-uniform"};
}

SelfSimilarSpec preset_spec(std::string_view name, std::span<const double> p,
                            std::span<const double> w) {
  std::vector<double> pv(p.begin(), p.end());
  std::vector<double> wv(w.begin(), w.end());
  const bool uniform_family =
      name == "uniform-pair" || name == "product-uniform";
  if (uniform_family && (!pv.empty() || !wv.empty())) {
    throw std::invalid_argument(std::string(name) +
                                " takes no probability overrides");
  }
  if (pv.empty()) pv = uniform_family ? std::vector<double>{0.5, 0.5}
                                      : std::vector<double>{0.7, 0.3};
  if (wv.empty()) wv = {0.5, 0.5};
  if (pv.size() != wv.size()) {
    throw std::invalid_argument("p and w must have equal length");
  }
  check_zero_patterns(pv, wv);

  SelfSimilarSpec spec;
  if (name == "binomial-pair" || name == "uniform-pair") {
    spec = line_spec(std::move(pv), std::move(wv));
  } else if (name == "product-binomial" || name == "product-uniform") {
    spec = planar_spec(pv, wv);
  } else {
    throw std::invalid_argument("unknown preset: " + std::string(name));
  }
  validate_spec(spec);
  return spec;
}

MeasurePair preset_pair(const SelfSimilarSpec& spec, int depth) {
  return MeasurePair{multinomial_cascade(spec, Component::First, depth),
                     multinomial_cascade(spec, Component::Second, depth)};
}

}  // namespace mmf
