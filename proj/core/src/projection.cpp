#include "mmf/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mmf/numeric.hpp"
#include "mmf/rng.hpp"

namespace mmf {

namespace {

constexpr std::uint64_t kDenseBinLimit = std::uint64_t{1} << 24;
constexpr std::uint64_t kMaxAttempts = 16;

std::uint64_t checked_pow_u64(int base, int exp) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(base)) {
      throw std::invalid_argument(
          "regrid target too fine: base^(dim*depth) exceeds 2^62");
    }
    v *= static_cast<std::uint64_t>(base);
  }
  return v;
}

double dot_n(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Coordinates of one point in the subspace basis. Both the cloud path and the
// streaming pair path project through this, in the same axis order, so the two
// paths stay bitwise interchangeable.
void project_point(const double* pos, const Subspace& V, double* out) {
  for (int c = 0; c < V.m; ++c) {
    out[c] = dot_n(pos, V.vec(c), V.n);
  }
}

// Orthonormalize in place. Modified Gram-Schmidt, run twice per vector so the
// residual reaches machine precision; false signals a numerically collapsed
// draw (caller redraws).
bool gram_schmidt(Subspace& V) {
  const int n = V.n;
  for (int i = 0; i < V.m; ++i) {
    double* vi = V.basis.data() + static_cast<std::size_t>(i) * n;
    const double norm0 = std::sqrt(dot_n(vi, vi, n));
    if (!std::isfinite(norm0) || norm0 == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < i; ++k) {
        const double* vk = V.vec(k);
        const double d = dot_n(vi, vk, n);
        for (int a = 0; a < n; ++a) vi[a] -= d * vk[a];
      }
    }
    const double norm1 = std::sqrt(dot_n(vi, vi, n));
    if (!(norm1 > 1e-8 * norm0)) return false;
    for (int a = 0; a < n; ++a) vi[a] /= norm1;
  }
  return true;
}

void widen_degenerate(std::vector<double>& lo, std::vector<double>& hi) {
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (lo[a] == hi[a]) {
      lo[a] -= 0.5;
      hi[a] += 0.5;
    }
  }
}

// Shared binning + accumulation core. Feeding the same (position, weight)
// sequence always produces the same bytes; regrid() and project_pair() both
// drain into this.
class RegridAccumulator {
 public:
  RegridAccumulator(int base, int dim, int depth, std::vector<double> lo,
                    std::vector<double> hi)
      : base_(base), dim_(dim), depth_(depth), lo_(std::move(lo)),
        hi_(std::move(hi)) {
    if (base < 2) throw std::invalid_argument("base must be >= 2");
    if (dim <= 0) throw std::invalid_argument("dimension must be positive");
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (lo_.size() != static_cast<std::size_t>(dim) || hi_.size() != lo_.size()) {
      throw std::invalid_argument("bounding box rank does not match dimension");
    }
    for (int a = 0; a < dim; ++a) {
      if (!(lo_[a] < hi_[a])) {
        throw std::invalid_argument("bounding box must have positive extent");
      }
    }
    axis_side_ = checked_pow_u64(base, depth);
    total_bins_ = checked_pow_u64(base, dim * depth);
    if (total_bins_ <= kDenseBinLimit) {
      dense_.resize(total_bins_);
    }
  }

  void add(const double* u, double w) {
    std::uint64_t index = 0;
    for (int a = 0; a < dim_; ++a) {
      if (!(u[a] >= lo_[a]) || !(u[a] <= hi_[a])) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "atom coordinate %.17g on axis %d falls outside the "
                      "declared box [%.17g, %.17g]",
                      u[a], a, lo_[a], hi_[a]);
        throw std::invalid_argument(buf);
      }
      // edge atoms bin to the lower-index cell: ceil(x) - 1, clamped
      const double x = (u[a] - lo_[a]) / (hi_[a] - lo_[a]) *
                       static_cast<double>(axis_side_);
      double c = std::ceil(x) - 1.0;
      if (c < 0.0) c = 0.0;
      const double last = static_cast<double>(axis_side_ - 1);
      if (c > last) c = last;
      index = index * axis_side_ + static_cast<std::uint64_t>(c);
    }
    if (!dense_.empty()) {
      dense_[index].add(w);
    } else {
      sparse_.emplace_back(index, w);
    }
  }

  [[nodiscard]] GridMeasure finish() {
    std::vector<Cell> cells;
    if (!dense_.empty()) {
      for (std::uint64_t i = 0; i < total_bins_; ++i) {
        const double v = dense_[i].value();
        if (v != 0.0) cells.push_back({i, v});
      }
    } else {
      // stable sort keeps the feed order within one bin, so the compensated
      // per-bin sums match the dense path bit for bit
      std::stable_sort(sparse_.begin(), sparse_.end(),
                       [](const auto& a, const auto& b) {
                         return a.first < b.first;
                       });
      std::size_t i = 0;
      while (i < sparse_.size()) {
        const std::uint64_t idx = sparse_[i].first;
        CompensatedSum s;
        while (i < sparse_.size() && sparse_[i].first == idx) {
          s.add(sparse_[i].second);
          ++i;
        }
        const double v = s.value();
        if (v != 0.0) cells.push_back({idx, v});
      }
    }
    GridMeasure out(base_, dim_, depth_, std::move(cells));
    out.set_frame({lo_, hi_});
    return out;
  }

 private:
  int base_;
  int dim_;
  int depth_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::uint64_t axis_side_ = 0;
  std::uint64_t total_bins_ = 0;
  std::vector<CompensatedSum> dense_;
  std::vector<std::pair<std::uint64_t, double>> sparse_;
};

}  // namespace

double orthonormality_residual(const Subspace& V) {
  double worst = 0.0;
  for (int i = 0; i < V.m; ++i) {
    for (int j = i; j < V.m; ++j) {
      const double g = dot_n(V.vec(i), V.vec(j), V.n);
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g - target));
    }
  }
  return worst;
}

Subspace sample_grassmann(int n, int m, std::uint64_t seed,
                          std::uint64_t sample_index) {
  if (n <= 0 || m <= 0 || m > n) {
    throw std::invalid_argument("subspace rank must satisfy 0 < m <= n");
  }
  for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(seed, sample_index * kMaxAttempts + attempt);
    Subspace V;
    V.n = n;
    V.m = m;
    V.basis.resize(static_cast<std::size_t>(n) * m);
    for (double& c : V.basis) c = rng.gaussian();
    if (!gram_schmidt(V)) continue;
    if (orthonormality_residual(V) > 1e-12) continue;
    return V;
  }
  throw std::runtime_error(
      "subspace sampling failed: every substream draw collapsed");
}

Subspace identity_subspace(int n) {
  if (n <= 0) throw std::invalid_argument("dimension must be positive");
  Subspace V;
  V.n = n;
  V.m = n;
  V.basis.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    V.basis[static_cast<std::size_t>(i) * n + i] = 1.0;
  }
  return V;
}

void save_subspace(const Subspace& V, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  char buf[64];
  for (int i = 0; i < V.m; ++i) {
    os << "v_" << i << " = (";
    for (int a = 0; a < V.n; ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", V.vec(i)[a]);
      os << (a ? ", " : "") << buf;
    }
    os << ")\n";
  }
  if (!os) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

Subspace load_subspace(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open: " + path.string());
  }
  Subspace V;
  std::string line;
  int row = 0;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    int index = -1;
    int consumed = 0;
    if (std::sscanf(line.c_str(), " v_%d = (%n", &index, &consumed) != 1 ||
        index != row) {
      throw std::runtime_error("bad basis line " + std::to_string(row + 1) +
                               " in " + path.string());
    }
    const std::size_t close = line.rfind(')');
    if (close == std::string::npos || close < static_cast<std::size_t>(consumed)) {
      throw std::runtime_error("unterminated basis line in " + path.string());
    }
    std::string body = line.substr(consumed, close - consumed);
    for (char& ch : body) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream parts(body);
    std::vector<double> coords;
    double value = 0.0;
    while (parts >> value) coords.push_back(value);
    if (!parts.eof() || coords.empty()) {
      throw std::runtime_error("bad basis coefficients in " + path.string());
    }
    for (double c : coords) {
      if (!std::isfinite(c)) {
        throw std::runtime_error("non-finite basis coefficient in " +
                                 path.string());
      }
    }
    if (row == 0) {
      V.n = static_cast<int>(coords.size());
    } else if (coords.size() != static_cast<std::size_t>(V.n)) {
      throw std::runtime_error("ragged basis rows in " + path.string());
    }
    V.basis.insert(V.basis.end(), coords.begin(), coords.end());
    ++row;
  }
  V.m = row;
  if (V.m == 0) {
    throw std::runtime_error("no basis vectors in " + path.string());
  }
  if (V.m > V.n) {
    throw std::runtime_error("more basis vectors than ambient dimensions in " +
                             path.string());
  }
  if (orthonormality_residual(V) > 1e-9) {
    throw std::runtime_error("basis in " + path.string() +
                             " is not orthonormal");
  }
  return V;
}

PointCloud project_cloud(const PointCloud& pc, const Subspace& V) {
  if (pc.dim != V.n) {
    throw std::invalid_argument("cloud dimension does not match subspace");
  }
  PointCloud out;
  out.dim = V.m;
  out.positions.resize(pc.size() * static_cast<std::size_t>(V.m));
  out.weights = pc.weights;
  for (std::size_t a = 0; a < pc.size(); ++a) {
    project_point(pc.position(a), V,
                  out.positions.data() + a * static_cast<std::size_t>(V.m));
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> cloud_bounds(
    const PointCloud& pc) {
  if (pc.size() == 0) {
    throw std::invalid_argument("empty cloud has no bounds");
  }
  std::vector<double> lo(pc.dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(pc.dim, -std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < pc.size(); ++a) {
    const double* u = pc.position(a);
    for (int c = 0; c < pc.dim; ++c) {
      lo[c] = std::min(lo[c], u[c]);
      hi[c] = std::max(hi[c], u[c]);
    }
  }
  widen_degenerate(lo, hi);
  return {std::move(lo), std::move(hi)};
}

GridMeasure regrid(const PointCloud& pc, int base, int depth,
                   const std::vector<double>& lo,
                   const std::vector<double>& hi) {
  RegridAccumulator acc(base, pc.dim, depth, lo, hi);
  for (std::size_t a = 0; a < pc.size(); ++a) {
    acc.add(pc.position(a), pc.weights[a]);
  }
  return acc.finish();
}

std::pair<GridMeasure, GridMeasure> project_pair(const GridMeasure& mu,
                                                 const GridMeasure& nu,
                                                 const Subspace& V, int base,
                                                 int depth) {
  if (mu.base() != nu.base() || mu.dim() != nu.dim() ||
      mu.depth() != nu.depth()) {
    throw std::invalid_argument("measures live on different grids");
  }
  if (mu.dim() != V.n) {
    throw std::invalid_argument("measure dimension does not match subspace");
  }
  if (mu.cell_count() == 0 || nu.cell_count() == 0) {
    throw std::invalid_argument("cannot project an empty measure");
  }

  const int n = V.n;
  const int m = V.m;
  std::vector<double> center(n);
  std::vector<double> u(m);

  std::vector<double> lo(m, std::numeric_limits<double>::infinity());
  std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
  const auto scan_bounds = [&](const GridMeasure& g) {
    for (const Cell& cell : g.cells()) {
      g.cell_center(cell.index, center);
      project_point(center.data(), V, u.data());
      for (int c = 0; c < m; ++c) {
        lo[c] = std::min(lo[c], u[c]);
        hi[c] = std::max(hi[c], u[c]);
      }
    }
  };
  scan_bounds(mu);
  scan_bounds(nu);
  widen_degenerate(lo, hi);

  const auto rebin = [&](const GridMeasure& g) {
    RegridAccumulator acc(base, m, depth, lo, hi);
    for (const Cell& cell : g.cells()) {
      g.cell_center(cell.index, center);
      project_point(center.data(), V, u.data());
      acc.add(u.data(), cell.mass);
    }
    return acc.finish();
  };
  GridMeasure mu_v = rebin(mu);
  GridMeasure nu_v = rebin(nu);
  return {std::move(mu_v), std::move(nu_v)};
}

}  // namespace mmf
