#pragma once

// CSV reports. Numbers carry 6 significant digits; missing values are
// empty fields.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "equicorr/harness.hpp"

namespace equicorr {

inline constexpr const char* kCsvHeader =
    "m,beta,sigma0_sq,tau_sq,rho,method,mean_total_error,mean_fp,mean_fn,se_total_error,"
    "discrepancy_pct";

std::string format_number(double value);

/// One row per (cell, method) followed by the cell's "ideal" row.
void write_csv(const ExperimentTable& table, std::ostream& out);
void write_csv(const ExperimentTable& table, const std::filesystem::path& destination);

/// One row per cell with a column per method, the ideal mean, and the
/// exact risk of the determined threshold.
void write_error_table(const ExperimentTable& table, std::ostream& out);

/// One row per cell with the discrepancy percentage of each method.
void write_discrepancy_table(const ExperimentTable& table, std::ostream& out);

}  // namespace equicorr
