#pragma once

// JSON experiment configuration.
//
// A config file is a JSON array of cells:
//
//   [{"params": {"m": 80, "beta": 0.3, "sigma0_sq": 1, "tau_sq": 15, "rho": 0},
//     "methods": ["T1", "determined", {"name": "fixed", "c": 2.5}],
//     "reps": 1000, "oracle_grid_points": 1000}]
//
// Unknown keys are rejected everywhere.

#include <filesystem>
#include <string_view>
#include <vector>

#include "equicorr/harness.hpp"
#include <json.hpp>

namespace equicorr {

/// "T1", "T2", "T3", "algorithm", "determined" with default tuning.
/// Parametrized methods need the object form and are rejected here.
ThresholdMethod method_from_name(std::string_view name);

ThresholdMethod parse_method(const nlohmann::json& j);
ModelParams parse_params(const nlohmann::json& j);
std::vector<ExperimentCell> parse_config(const nlohmann::json& j);

/// Reads and parses a config file; errors carry the path.
std::vector<ExperimentCell> load_config(const std::filesystem::path& path);

}  // namespace equicorr
