#include "equicorr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace equicorr {
namespace {

struct Labelled {
  double magnitude;
  bool signal;
};

// Sorted |y| with labels, plus the number of signals at or below each prefix.
struct SortedSample {
  std::vector<Labelled> items;
  std::vector<std::size_t> signals_below;  // signals among items[0..k)
  std::size_t signals = 0;

  // Total error when items[0..k) are unselected and the rest selected.
  [[nodiscard]] std::size_t error_with_unselected(std::size_t k) const {
    const std::size_t fn = signals_below[k];
    const std::size_t selected = items.size() - k;
    const std::size_t tp = signals - fn;
    return fn + (selected - tp);
  }
};

SortedSample sort_sample(std::span<const double> y, const SignalVector& nu) {
  if (y.empty()) throw std::invalid_argument("ideal threshold: empty input");
  if (nu.size() != y.size()) throw std::invalid_argument("ideal threshold: length mismatch");
  SortedSample s;
  s.items.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    s.items.push_back({std::abs(y[i]), nu.bits[i] != 0});
  }
  std::sort(s.items.begin(), s.items.end(),
            [](const Labelled& a, const Labelled& b) { return a.magnitude < b.magnitude; });
  s.signals_below.assign(s.items.size() + 1, 0);
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    s.signals_below[i + 1] = s.signals_below[i] + (s.items[i].signal ? 1 : 0);
  }
  s.signals = s.signals_below.back();
  return s;
}

void require_positive_values(std::span<const double> z) {
  for (double v : z) {
    if (!(v > 0.0)) throw std::invalid_argument("clustering criterion: values must be > 0");
  }
}

}  // namespace

OracleResult ideal_threshold_grid(std::span<const double> y, const SignalVector& nu,
                                  std::size_t grid_points) {
  if (grid_points < 2) throw std::invalid_argument("ideal_threshold_grid: grid_points must be >= 2");
  const SortedSample s = sort_sample(y, nu);
  const double lo = s.items.front().magnitude;
  const double hi = s.items.back().magnitude;
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);

  OracleResult best;
  best.min_total_error = std::numeric_limits<std::size_t>::max();
  std::size_t unselected = 0;
  for (std::size_t g = 0; g < grid_points; ++g) {
    const double c = g + 1 == grid_points ? hi : lo + static_cast<double>(g) * step;
    while (unselected < s.items.size() && s.items[unselected].magnitude <= c) ++unselected;
    const std::size_t err = s.error_with_unselected(unselected);
    if (err < best.min_total_error) {
      best = OracleResult{c, err, 1};
    } else if (err == best.min_total_error) {
      ++best.n_optima;
    }
  }
  return best;
}

OracleResult ideal_threshold_exact(std::span<const double> y, const SignalVector& nu) {
  const SortedSample s = sort_sample(y, nu);
  const std::size_t m = s.items.size();

  OracleResult best;
  best.min_total_error = std::numeric_limits<std::size_t>::max();
  auto consider = [&](double c, std::size_t unselected) {
    const std::size_t err = s.error_with_unselected(unselected);
    if (err < best.min_total_error) {
      best = OracleResult{c, err, 1};
    } else if (err == best.min_total_error) {
      ++best.n_optima;
    }
  };

  // Select everything, unless min|y| is zero and cannot be selected.
  const double smallest = s.items.front().magnitude;
  if (smallest > 0.0) consider(0.5 * smallest, 0);
  for (std::size_t k = 1; k < m; ++k) {
    const double below = s.items[k - 1].magnitude;
    const double above = s.items[k].magnitude;
    if (below < above) consider(below + 0.5 * (above - below), k);
  }
  consider(s.items.back().magnitude, m);
  return best;
}

double between_group_gap(std::span<const double> z, double c) {
  require_positive_values(z);
  double sum_lo = 0.0;
  double sum_hi = 0.0;
  std::size_t n_lo = 0;
  std::size_t n_hi = 0;
  for (double v : z) {
    if (v <= c) {
      sum_lo += v;
      ++n_lo;
    } else {
      sum_hi += v;
      ++n_hi;
    }
  }
  if (n_lo == 0 || n_hi == 0) {
    throw std::invalid_argument("between_group_gap: cut leaves a group empty");
  }
  const double n = static_cast<double>(z.size());
  const double weight = static_cast<double>(n_lo) * static_cast<double>(n_hi) / (n * n);
  return weight * std::abs(sum_lo / static_cast<double>(n_lo) - sum_hi / static_cast<double>(n_hi));
}

double within_group_var(std::span<const double> z, double c) {
  require_positive_values(z);
  if (z.empty()) throw std::invalid_argument("within_group_var: empty input");
  double sum_lo = 0.0;
  double sum_hi = 0.0;
  std::size_t n_lo = 0;
  std::size_t n_hi = 0;
  for (double v : z) {
    if (v <= c) {
      sum_lo += v;
      ++n_lo;
    } else {
      sum_hi += v;
      ++n_hi;
    }
  }
  const double mean_lo = n_lo ? sum_lo / static_cast<double>(n_lo) : 0.0;
  const double mean_hi = n_hi ? sum_hi / static_cast<double>(n_hi) : 0.0;
  double total = 0.0;
  for (double v : z) {
    const double d = v - (v <= c ? mean_lo : mean_hi);
    total += d * d;
  }
  return total;
}

}  // namespace equicorr
