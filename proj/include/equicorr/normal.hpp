#pragma once

// Standard normal distribution routines and the Mills-ratio tail bracket.

#include <stdexcept>

namespace equicorr::stats {

/// A probability in [0, 1]. Construction rejects anything outside that range.
class Probability {
 public:
  explicit Probability(double value);

  [[nodiscard]] double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }  // NOLINT(google-explicit-constructor)

 private:
  double value_;
};

/// Two-sided bracket for P[|N(0,1)| > x].
struct TailBounds {
  double lower;
  double upper;
};

/// Standard normal density.
double std_normal_pdf(double x) noexcept;

/// Phi(x). Throws std::invalid_argument for non-finite x.
Probability std_normal_cdf(double x);

/// P[|N(0, sigma^2)| > x] for x >= 0, sigma > 0.
Probability abs_normal_tail(double x, double sigma);

/// Inverse of Phi on (0, 1), solved on the CDF itself by safeguarded Newton
/// iteration so the result carries no error beyond that of std_normal_cdf.
double std_normal_quantile(double p);

/// 2(1/x - 1/x^3)phi(x) <= P[|N(0,1)| > x] <= (2/x)phi(x), valid for x > 1.
TailBounds mills_bounds(double x);

/// P[X^2 <= t] for X ~ N(0, sigma^2).
Probability squared_normal_cdf(double t, double sigma);

}  // namespace equicorr::stats
