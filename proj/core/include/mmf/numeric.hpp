#pragma once

// Shared numeric kernels. Every reduction in this project runs in a fixed,
// documented order so repeated runs produce identical bytes; nothing here may
// introduce order nondeterminism (no atomics, no hash-order iteration).

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace mmf {

// Neumaier's variant of compensated summation. The sequence of add() calls is
// part of the result: callers feed values in ascending cell order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log(sum_i exp(term(i))) for i in [0, count), evaluated in index order with
// the usual max shift. Returns -inf for count == 0.
template <class TermFn>
[[nodiscard]] double log_sum_exp(std::size_t count, TermFn&& term) {
  if (count == 0) return -std::numeric_limits<double>::infinity();
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double x = term(i);
    if (x > m) m = x;
  }
  if (!std::isfinite(m)) return m;
  CompensatedSum s;
  for (std::size_t i = 0; i < count; ++i) {
    s.add(std::exp(term(i) - m));
  }
  return m + std::log(s.value());
}

// Ordinary least squares of y against x with intercept.
struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;          // 1 when the y variance is zero (perfect fit)
  double max_residual = 0.0;
};

[[nodiscard]] inline OlsFit ols_fit(std::span<const double> x,
                                    std::span<const double> y) {
  const std::size_t n = x.size();
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double xbar = sx.value() / static_cast<double>(n);
  const double ybar = sy.value() / static_cast<double>(n);
  CompensatedSum sxx, sxy, syy;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - xbar;
    const double dy = y[i] - ybar;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
  }
  OlsFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = ybar - fit.slope * xbar;
  CompensatedSum sse;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    sse.add(r * r);
    worst = std::max(worst, std::abs(r));
  }
  fit.max_residual = worst;
  const double sst = syy.value();
  fit.r2 = sst > 0.0 ? 1.0 - sse.value() / sst : 1.0;
  return fit;
}

}  // namespace mmf
