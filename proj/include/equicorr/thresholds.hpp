#pragma once

// Threshold rules producing the classification cut C.

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "equicorr/model.hpp"

namespace equicorr {

/// (sum |y_i|^beta_exp / m)^(1/beta_exp). beta_exp 4, 2, 1 give T1, T2, T3.
struct PowerMean {
  double beta_exp = 4.0;
};

/// Two-group mean-split iteration started at T1.
struct Iterative {
  double eps = 1e-6;
  int max_iter = 1000;
};

/// Closed-form threshold from the Mills-ratio approximation of the risk.
struct Determined {};

/// Select the round(alpha_frac * m) largest |y_i|.
struct TopFraction {
  double alpha_frac = 0.1;
};

/// Select the K largest |y_i| with K from the normal approximation of a
/// Poisson(mp) signal count.
struct PoissonK {
  double alpha = 0.5;
};

struct FixedC {
  double c = 0.0;
};

using ThresholdMethod = std::variant<PowerMean, Iterative, Determined, TopFraction, PoissonK, FixedC>;

/// Name used in config files and CSV output: "T1", "T2", "T3",
/// "algorithm", "determined", "top_fraction", "poisson_k", "fixed".
/// Power means with other exponents are reported as "power_mean".
std::string method_name(const ThresholdMethod& method);

/// Throws std::invalid_argument when a tuning value is out of range.
void validate(const ThresholdMethod& method);

struct IterativeTrace {
  double c_final = 0.0;
  int iterations = 0;
  std::vector<double> sequence;
  bool converged = false;
};

double power_mean_threshold(std::span<const double> y, double beta_exp);

/// Mean-split iteration on |y|.
///
/// Z0 is the fourth-power mean. Each step splits |y| at Z into
/// {|y| <= Z} and {|y| > Z} and moves Z to the midpoint of the two group
/// means. Stops when |dZ| < eps (converged), after max_iter steps, or when
/// a split leaves a group empty; in the last case the current Z is returned
/// unconverged.
IterativeTrace iterative_threshold(std::span<const double> y, double eps = 1e-6,
                                   int max_iter = 1000);

/// Cut such that exactly k coordinates satisfy |y_i| > C, or the largest
/// achievable count below k when ties straddle the cut. For k = m the cut
/// is the largest double below min|y| (0 if min|y| is 0).
double top_k_threshold(std::span<const double> y, std::size_t k);

/// Expected number of selected coordinates under the marginal model.
double expected_k(const ModelParams& params, double c);

/// max(0, ceil(mp + z * sqrt(mp))) with z the (1 - alpha) normal quantile.
std::size_t poisson_normal_k(const ModelParams& params, double alpha);

double compute_threshold(const ThresholdMethod& method, std::span<const double> y,
                         const ModelParams& params);

}  // namespace equicorr
