#include "equicorr/normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace equicorr::stats {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

Probability::Probability(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("probability outside [0, 1]: " + std::to_string(value));
  }
}

double std_normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi * kInvSqrt2);
}

// erfc keeps full relative precision in the far tails, so computing Phi
// through it gives absolute error far below 1e-12 over the whole line.
Probability std_normal_cdf(double x) {
  require_finite(x, "x");
  return Probability(0.5 * std::erfc(-x * kInvSqrt2));
}

Probability abs_normal_tail(double x, double sigma) {
  require_finite(x, "x");
  require_finite(sigma, "sigma");
  if (x < 0.0) throw std::invalid_argument("abs_normal_tail: x must be >= 0");
  if (sigma <= 0.0) throw std::invalid_argument("abs_normal_tail: sigma must be > 0");
  return Probability(std::erfc(x / sigma * kInvSqrt2));
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("std_normal_quantile: p must lie in (0, 1)");
  }
  if (p == 0.5) return 0.0;
  // Solve on the lower half and reflect; Phi(x) for x < 0 is computed
  // without cancellation.
  const bool upper = p > 0.5;
  const double target = upper ? 1.0 - p : p;

  double lo = -40.0;
  double hi = 0.0;
  double x = -1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = 0.5 * std::erfc(-x * kInvSqrt2) - target;
    if (f == 0.0) break;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double density = std_normal_pdf(x);
    double next = density > 0.0 ? x - f / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return upper ? -x : x;
}

TailBounds mills_bounds(double x) {
  require_finite(x, "x");
  if (x <= 1.0) throw std::invalid_argument("mills_bounds: x must be > 1");
  const double density = std_normal_pdf(x);
  return TailBounds{2.0 * (1.0 / x - 1.0 / (x * x * x)) * density, 2.0 / x * density};
}

Probability squared_normal_cdf(double t, double sigma) {
  require_finite(t, "t");
  require_finite(sigma, "sigma");
  if (t < 0.0) throw std::invalid_argument("squared_normal_cdf: t must be >= 0");
  if (sigma <= 0.0) throw std::invalid_argument("squared_normal_cdf: sigma must be > 0");
  return Probability(std::erf(std::sqrt(t) / sigma * kInvSqrt2));
}

}  // namespace equicorr::stats
