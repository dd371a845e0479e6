#pragma once

// Selection by a cut, confusion counts, losses, and the discrepancy metric.

#include <cstddef>
#include <span>
#include <vector>

#include "equicorr/model.hpp"

namespace equicorr {

/// Zero-based indices of selected coordinates, ascending.
struct Selection {
  std::vector<std::size_t> selected;
};

struct ConfusionCounts {
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tp = 0;
  std::size_t tn = 0;

  [[nodiscard]] std::size_t total_error() const noexcept { return fp + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// {i : |y_i| > c}. The inequality is strict; ties stay unselected.
Selection select(std::span<const double> y, double c);

ConfusionCounts confusion(const Selection& sel, const SignalVector& nu);

/// delta0 * fp + deltaA * fn.
double loss(const ConfusionCounts& conf, double delta0, double deltaA);

/// 100 (e_method - e_ideal) / e_method.
double discrepancy_pct(double e_method, double e_ideal);

}  // namespace equicorr
