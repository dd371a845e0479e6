#pragma once

// Equicorrelated two-group Gaussian model: parameters, sampler, and the
// exact and Mills-approximated risk of a fixed threshold.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "equicorr/normal.hpp"

namespace equicorr {

using Rng = std::mt19937_64;

struct ModelParams {
  int m = 1;
  std::optional<double> beta;  ///< sparsity exponent, p = m^-beta
  std::optional<double> p;     ///< explicit prior signal probability
  double sigma0_sq = 1.0;      ///< null variance
  double tau_sq = 1.0;         ///< extra variance of a signal
  double rho = 0.0;            ///< equicorrelation of the effects
  double delta0 = 1.0;         ///< false-positive loss
  double deltaA = 1.0;         ///< false-negative loss
  double eps_sd = 0.0;         ///< measurement-noise standard deviation
  double rho1 = 0.0;           ///< equicorrelation of the noise
};

/// Raised when the closed-form threshold has no positive solution.
class NoPositiveThreshold : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Lower end of the open interval of valid equicorrelations, -1/(m-1).
double min_equicorrelation(int m);

/// Throws std::invalid_argument naming the first violated constraint.
void validate(const ModelParams& params);

/// Explicit p if given, otherwise m^-beta. Exactly one must be present.
double resolve_p(const ModelParams& params);

struct SignalVector {
  std::vector<std::uint8_t> bits;

  [[nodiscard]] std::size_t size() const noexcept { return bits.size(); }
  [[nodiscard]] std::size_t count() const noexcept;
};

struct TrialSample {
  SignalVector nu;
  std::vector<double> y;
};

SignalVector draw_signals(const ModelParams& params, Rng& rng);

/// Draws y | nu with covariance D_nu Sigma2 D_nu + eps_sd^2 Sigma1.
///
/// Equicorrelated vectors are built from i.i.d. normals Z via
///   w_i = sqrt(1-rho) (Z_i - mean(Z)) + sqrt(1+(m-1)rho) mean(Z),
/// which has unit variances and correlation rho for every rho in
/// (-1/(m-1), 1] and costs O(m) per draw.
TrialSample draw_observations(const ModelParams& params, SignalVector nu, Rng& rng);

/// Convenience: draw_signals followed by draw_observations.
TrialSample draw_trial(const ModelParams& params, Rng& rng);

struct RiskBreakdown {
  stats::Probability t11;  ///< per-null rejection probability
  stats::Probability t21;  ///< per-signal miss probability
  double expected_fp;
  double expected_fn;
  double risk;
};

/// Bayes risk of the rule |y_i| > c under the marginal model. Exact for
/// any rho because it only involves the marginals.
RiskBreakdown exact_risk(const ModelParams& params, double c);

/// f(C) = (V/C) exp(-aC^2) + UC and its derivative.
struct ApproxRisk {
  double U;
  double V;
  double a;
  double f_of_C;
  double fprime_of_C;
};

ApproxRisk approx_risk(const ModelParams& params, double c);

/// C = sqrt(2 sigma0^2 log((delta0 (1-p) / (deltaA p)) sqrt(1 + tau^2/sigma0^2))).
/// Throws NoPositiveThreshold when the log argument is <= 1.
double determined_threshold(const ModelParams& params);

}  // namespace equicorr
