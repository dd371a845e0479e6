#include "equicorr/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace equicorr {
namespace {

[[noreturn]] void reject(const std::string& message) {
  throw std::invalid_argument(message);
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    reject(std::string(name) + " must be a finite value > 0");
  }
}

void check_correlation(double rho, int m, const char* name) {
  const double lo = min_equicorrelation(m);
  if (!(rho > lo && rho <= 1.0)) {
    std::ostringstream os;
    os << name << " = " << rho << " is outside the valid equicorrelation range ("
       << lo << ", 1] for m = " << m;
    reject(os.str());
  }
}

// Fills `out` with an equicorrelated standard normal vector.
void equicorrelated_normals(double rho, std::vector<double>& out, Rng& rng) {
  std::normal_distribution<double> normal;
  const auto m = static_cast<double>(out.size());
  double sum = 0.0;
  for (double& z : out) {
    z = normal(rng);
    sum += z;
  }
  const double mean = sum / m;
  const double spread = std::sqrt(1.0 - rho);
  const double common = std::sqrt(std::max(0.0, 1.0 + (m - 1.0) * rho)) * mean;
  for (double& z : out) z = spread * (z - mean) + common;
}

}  // namespace

double min_equicorrelation(int m) {
  if (m <= 1) return -std::numeric_limits<double>::infinity();
  return -1.0 / static_cast<double>(m - 1);
}

void validate(const ModelParams& params) {
  if (params.m < 1) reject("m must be a positive integer");
  if (params.beta.has_value() == params.p.has_value()) {
    reject("exactly one of beta or p must be given");
  }
  if (params.beta && !(*params.beta > 0.0 && *params.beta <= 1.0)) {
    reject("beta must lie in (0, 1]");
  }
  if (params.p && !(*params.p > 0.0 && *params.p < 1.0)) {
    reject("p must lie in (0, 1)");
  }
  require_positive(params.sigma0_sq, "sigma0_sq");
  require_positive(params.tau_sq, "tau_sq");
  require_positive(params.delta0, "delta0");
  require_positive(params.deltaA, "deltaA");
  if (!(params.eps_sd >= 0.0) || !std::isfinite(params.eps_sd)) {
    reject("eps_sd must be a finite value >= 0");
  }
  check_correlation(params.rho, params.m, "rho");
  check_correlation(params.rho1, params.m, "rho1");
  const double p = resolve_p(params);
  // beta = 1 with m = 1 resolves to p = 1.
  if (!(p > 0.0 && p < 1.0)) reject("resolved p must lie in (0, 1)");
}

double resolve_p(const ModelParams& params) {
  if (params.beta.has_value() == params.p.has_value()) {
    reject("exactly one of beta or p must be given");
  }
  if (params.p) return *params.p;
  return std::exp(-*params.beta * std::log(static_cast<double>(params.m)));
}

std::size_t SignalVector::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

SignalVector draw_signals(const ModelParams& params, Rng& rng) {
  validate(params);
  std::bernoulli_distribution coin(resolve_p(params));
  SignalVector nu;
  nu.bits.resize(static_cast<std::size_t>(params.m));
  for (auto& bit : nu.bits) bit = coin(rng) ? 1 : 0;
  return nu;
}

TrialSample draw_observations(const ModelParams& params, SignalVector nu, Rng& rng) {
  validate(params);
  const auto m = static_cast<std::size_t>(params.m);
  if (nu.size() != m) reject("signal vector length differs from m");

  const double sd_null = std::sqrt(params.sigma0_sq);
  const double sd_signal = std::sqrt(params.sigma0_sq + params.tau_sq);

  TrialSample sample{std::move(nu), std::vector<double>(m)};
  equicorrelated_normals(params.rho, sample.y, rng);
  for (std::size_t i = 0; i < m; ++i) {
    sample.y[i] *= sample.nu.bits[i] ? sd_signal : sd_null;
  }
  if (params.eps_sd > 0.0) {
    std::vector<double> noise(m);
    equicorrelated_normals(params.rho1, noise, rng);
    for (std::size_t i = 0; i < m; ++i) sample.y[i] += params.eps_sd * noise[i];
  }
  return sample;
}

TrialSample draw_trial(const ModelParams& params, Rng& rng) {
  auto nu = draw_signals(params, rng);
  return draw_observations(params, std::move(nu), rng);
}

RiskBreakdown exact_risk(const ModelParams& params, double c) {
  validate(params);
  if (!(c >= 0.0)) reject("threshold C must be >= 0");
  const double p = resolve_p(params);
  const double m = params.m;
  const double sd_null = std::sqrt(params.sigma0_sq);
  const double sd_signal = std::sqrt(params.sigma0_sq + params.tau_sq);

  const stats::Probability t11 = std::isinf(c) ? stats::Probability(0.0)
                                               : stats::abs_normal_tail(c, sd_null);
  const stats::Probability t21 = std::isinf(c) ? stats::Probability(1.0)
                                               : stats::squared_normal_cdf(c * c, sd_signal);
  const double fp = m * (1.0 - p) * t11;
  const double fn = m * p * t21;
  return RiskBreakdown{t11, t21, fp, fn, params.delta0 * fp + params.deltaA * fn};
}

ApproxRisk approx_risk(const ModelParams& params, double c) {
  validate(params);
  if (!(c > 0.0) || !std::isfinite(c)) reject("approx_risk: C must be a finite value > 0");
  const double p = resolve_p(params);
  const double m = params.m;
  const double sqrt_2_over_pi = std::sqrt(2.0 / std::numbers::pi);

  ApproxRisk out{};
  out.U = 2.0 * params.deltaA * m * p /
          std::sqrt(2.0 * std::numbers::pi * (params.sigma0_sq + params.tau_sq));
  out.V = std::sqrt(params.sigma0_sq) * params.delta0 * m * (1.0 - p) * sqrt_2_over_pi;
  out.a = 1.0 / (2.0 * params.sigma0_sq);
  const double decay = std::exp(-out.a * c * c);
  out.f_of_C = out.V / c * decay + out.U * c;
  out.fprime_of_C = out.U - out.V * decay * (1.0 / (c * c) + 2.0 * out.a);
  return out;
}

double determined_threshold(const ModelParams& params) {
  validate(params);
  const double p = resolve_p(params);
  const double ratio = (params.delta0 * (1.0 - p)) / (params.deltaA * p) *
                       std::sqrt(1.0 + params.tau_sq / params.sigma0_sq);
  if (!(ratio > 1.0)) {
    throw NoPositiveThreshold(
        "determined threshold: log argument <= 1, no positive threshold exists");
  }
  return std::sqrt(2.0 * params.sigma0_sq * std::log(ratio));
}

}  // namespace equicorr
