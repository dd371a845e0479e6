#include "equicorr/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace equicorr {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_nonempty(std::span<const double> y, const char* who) {
  if (y.empty()) throw std::invalid_argument(std::string(who) + ": empty input");
}

std::vector<double> sorted_magnitudes(std::span<const double> y) {
  std::vector<double> a(y.size());
  std::transform(y.begin(), y.end(), a.begin(), [](double v) { return std::abs(v); });
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace

std::string method_name(const ThresholdMethod& method) {
  return std::visit(Overloaded{
                        [](const PowerMean& pm) -> std::string {
                          if (pm.beta_exp == 4.0) return "T1";
                          if (pm.beta_exp == 2.0) return "T2";
                          if (pm.beta_exp == 1.0) return "T3";
                          return "power_mean";
                        },
                        [](const Iterative&) -> std::string { return "algorithm"; },
                        [](const Determined&) -> std::string { return "determined"; },
                        [](const TopFraction&) -> std::string { return "top_fraction"; },
                        [](const PoissonK&) -> std::string { return "poisson_k"; },
                        [](const FixedC&) -> std::string { return "fixed"; },
                    },
                    method);
}

void validate(const ThresholdMethod& method) {
  std::visit(Overloaded{
                 [](const PowerMean& pm) {
                   if (!(pm.beta_exp > 0.0) || !std::isfinite(pm.beta_exp))
                     throw std::invalid_argument("power mean exponent must be > 0");
                 },
                 [](const Iterative& it) {
                   if (!(it.eps > 0.0)) throw std::invalid_argument("algorithm eps must be > 0");
                   if (it.max_iter < 1)
                     throw std::invalid_argument("algorithm max_iter must be >= 1");
                 },
                 [](const Determined&) {},
                 [](const TopFraction& tf) {
                   if (!(tf.alpha_frac > 0.0 && tf.alpha_frac < 1.0))
                     throw std::invalid_argument("top_fraction alpha_frac must lie in (0, 1)");
                 },
                 [](const PoissonK& pk) {
                   if (!(pk.alpha > 0.0 && pk.alpha < 1.0))
                     throw std::invalid_argument("poisson_k alpha must lie in (0, 1)");
                 },
                 [](const FixedC& fc) {
                   if (!(fc.c >= 0.0)) throw std::invalid_argument("fixed threshold must be >= 0");
                 },
             },
             method);
}

double power_mean_threshold(std::span<const double> y, double beta_exp) {
  require_nonempty(y, "power_mean_threshold");
  if (!(beta_exp > 0.0)) throw std::invalid_argument("power_mean_threshold: beta_exp must be > 0");
  // Summing sorted magnitudes makes the result exactly permutation and sign
  // invariant.
  const auto a = sorted_magnitudes(y);
  double sum = 0.0;
  for (double v : a) sum += std::pow(v, beta_exp);
  return std::pow(sum / static_cast<double>(a.size()), 1.0 / beta_exp);
}

IterativeTrace iterative_threshold(std::span<const double> y, double eps, int max_iter) {
  require_nonempty(y, "iterative_threshold");
  if (!(eps > 0.0)) throw std::invalid_argument("iterative_threshold: eps must be > 0");
  if (max_iter < 1) throw std::invalid_argument("iterative_threshold: max_iter must be >= 1");

  const auto a = sorted_magnitudes(y);
  // prefix[k] = a[0] + ... + a[k-1]
  std::vector<double> prefix(a.size() + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) prefix[i + 1] = prefix[i] + a[i];
  const double total = prefix.back();

  IterativeTrace trace;
  double z = power_mean_threshold(y, 4.0);
  trace.sequence.push_back(z);
  while (trace.iterations < max_iter) {
    const auto lower =
        static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), z) - a.begin());
    const std::size_t upper = a.size() - lower;
    if (lower == 0 || upper == 0) break;
    const double mean_lower = prefix[lower] / static_cast<double>(lower);
    const double mean_upper = (total - prefix[lower]) / static_cast<double>(upper);
    const double next = 0.5 * (mean_lower + mean_upper);
    trace.sequence.push_back(next);
    ++trace.iterations;
    const double step = std::abs(next - z);
    z = next;
    if (step < eps) {
      trace.converged = true;
      break;
    }
  }
  trace.c_final = z;
  return trace;
}

double top_k_threshold(std::span<const double> y, std::size_t k) {
  require_nonempty(y, "top_k_threshold");
  if (k > y.size()) throw std::invalid_argument("top_k_threshold: k exceeds m");
  const auto a = sorted_magnitudes(y);
  if (k == a.size()) {
    const double smallest = a.front();
    return smallest > 0.0 ? std::nextafter(smallest, 0.0) : 0.0;
  }
  // (k+1)-th largest magnitude.
  return a[a.size() - 1 - k];
}

double expected_k(const ModelParams& params, double c) {
  const auto risk = exact_risk(params, c);
  const double p = resolve_p(params);
  const double m = params.m;
  return m * p * (1.0 - risk.t21) + m * (1.0 - p) * risk.t11;
}

std::size_t poisson_normal_k(const ModelParams& params, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("poisson_normal_k: alpha must lie in (0, 1)");
  validate(params);
  const double mean = params.m * resolve_p(params);
  if (!(mean > 0.0)) throw std::invalid_argument("poisson_normal_k: m * p must be > 0");
  const double z = stats::std_normal_quantile(1.0 - alpha);
  const double k = std::ceil(mean + z * std::sqrt(mean));
  return k <= 0.0 ? 0 : static_cast<std::size_t>(k);
}

double compute_threshold(const ThresholdMethod& method, std::span<const double> y,
                         const ModelParams& params) {
  validate(method);
  return std::visit(
      Overloaded{
          [&](const PowerMean& pm) { return power_mean_threshold(y, pm.beta_exp); },
          [&](const Iterative& it) { return iterative_threshold(y, it.eps, it.max_iter).c_final; },
          [&](const Determined&) { return determined_threshold(params); },
          [&](const TopFraction& tf) {
            const auto k = static_cast<std::size_t>(std::lround(tf.alpha_frac * params.m));
            return top_k_threshold(y, std::min(k, y.size()));
          },
          [&](const PoissonK& pk) {
            return top_k_threshold(y, std::min(poisson_normal_k(params, pk.alpha), y.size()));
          },
          [&](const FixedC& fc) { return fc.c; },
      },
      method);
}

}  // namespace equicorr
