#pragma once

// Truth-using reference cuts and the two-group clustering criteria.

#include <cstddef>
#include <span>

#include "equicorr/model.hpp"

namespace equicorr {

struct OracleResult {
  double c_ideal = 0.0;
  std::size_t min_total_error = 0;
  std::size_t n_optima = 0;  ///< candidate cuts attaining the minimum
};

/// Scans grid_points equally spaced cuts over [min|y|, max|y|] and keeps the
/// first one with the smallest fp + fn against nu.
OracleResult ideal_threshold_grid(std::span<const double> y, const SignalVector& nu,
                                  std::size_t grid_points = 1000);

/// Global minimum of fp + fn over every strict cut. Only m + 1 partitions
/// exist, so the candidates are half of min|y|, the midpoints between
/// consecutive distinct sorted |y|, and max|y|.
OracleResult ideal_threshold_exact(std::span<const double> y, const SignalVector& nu);

/// (m1 m2 / m^2) |mean(z <= c) - mean(z > c)|. Both groups must be nonempty.
double between_group_gap(std::span<const double> z, double c);

/// Sum of squared deviations from the group means of {z <= c} and {z > c};
/// an empty group contributes 0.
double within_group_var(std::span<const double> z, double c);

}  // namespace equicorr
