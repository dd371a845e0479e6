#include "equicorr/scoring.hpp"

#include <cmath>
#include <stdexcept>

namespace equicorr {

Selection select(std::span<const double> y, double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("select: threshold must be >= 0");
  Selection sel;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (std::abs(y[i]) > c) sel.selected.push_back(i);
  }
  return sel;
}

ConfusionCounts confusion(const Selection& sel, const SignalVector& nu) {
  const std::size_t m = nu.size();
  std::vector<std::uint8_t> picked(m, 0);
  for (std::size_t i : sel.selected) {
    if (i >= m) throw std::out_of_range("confusion: selected index out of range");
    if (picked[i]) throw std::invalid_argument("confusion: duplicate selected index");
    picked[i] = 1;
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < m; ++i) {
    const bool signal = nu.bits[i] != 0;
    if (picked[i]) {
      ++(signal ? c.tp : c.fp);
    } else {
      ++(signal ? c.fn : c.tn);
    }
  }
  return c;
}

double loss(const ConfusionCounts& conf, double delta0, double deltaA) {
  return delta0 * static_cast<double>(conf.fp) + deltaA * static_cast<double>(conf.fn);
}

double discrepancy_pct(double e_method, double e_ideal) {
  if (!(e_method > 0.0)) {
    throw std::invalid_argument("discrepancy_pct: method error must be > 0");
  }
  return 100.0 * (e_method - e_ideal) / e_method;
}

}  // namespace equicorr
