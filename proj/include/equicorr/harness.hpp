#pragma once

// Deterministic parallel Monte Carlo over experiment cells.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "equicorr/model.hpp"
#include "equicorr/thresholds.hpp"

namespace equicorr {

struct ExperimentCell {
  ModelParams params;
  std::vector<ThresholdMethod> methods;
  int reps = 1000;
  int oracle_grid_points = 1000;
};

/// Replication averages of one rule. Total error is fp + fn.
struct MethodStats {
  double mean_total_error = 0.0;
  double mean_fp = 0.0;
  double mean_fn = 0.0;
  double se_total_error = 0.0;

  friend bool operator==(const MethodStats&, const MethodStats&) = default;
};

struct CellResult {
  /// One entry per cell method; empty when the method failed in any replication.
  std::vector<std::optional<MethodStats>> methods;
  MethodStats ideal;
  /// discrepancy_pct(method mean, ideal mean); empty when undefined.
  std::vector<std::optional<double>> discrepancy;

  friend bool operator==(const CellResult&, const CellResult&) = default;
};

struct TableRow {
  ExperimentCell cell;
  CellResult result;
};

struct ExperimentTable {
  std::vector<TableRow> rows;
};

/// Throws std::invalid_argument for an invalid cell.
void validate(const ExperimentCell& cell);

/// Seed of replication `rep` of cell `cell_ordinal`; a splitmix64 chain
/// over the three inputs.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t cell_ordinal,
                          std::uint64_t rep);

/// Every replication draws from its own derived stream and results are
/// reduced in replication order, so the output does not depend on
/// `workers`.
CellResult run_cell(const ExperimentCell& cell, std::uint64_t master_seed, int workers,
                    std::uint64_t cell_ordinal = 0);

/// Cells keep declaration order; the ordinal of a cell is its position, so
/// duplicate cells get different streams.
ExperimentTable run_grid(const std::vector<ExperimentCell>& config, std::uint64_t master_seed,
                         int workers);

/// Columns of the published tables hold the variances sigma0^2 and tau^2
/// directly. Flip to read them as standard deviations.
inline constexpr bool kTableColumnsAreVariances = true;

/// The built-in grid: m in {80, 180}, beta in {0.3, 0.7}, sigma0 column in
/// {1, 3}, tau column in {15, 90}, rho in {0, 0.1, 0.7}, followed by the
/// negative-rho cells (-0.00633 for m = 80, -0.00279 for m = 180). Methods
/// are T1, T2, T3, algorithm, determined.
std::vector<ExperimentCell> paper_grid(int reps = 1000, int oracle_grid_points = 1000);

}  // namespace equicorr
