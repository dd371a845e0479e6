#include "equicorr/config.hpp"

#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace equicorr {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto key : allowed) known = known || item.key() == key;
    if (!known) throw std::invalid_argument(where + ": unknown key \"" + item.key() + "\"");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) {
    throw std::invalid_argument(std::string("field \"") + key + "\" must be a number");
  }
  return it->get<T>();
}

}  // namespace

ThresholdMethod method_from_name(std::string_view name) {
  if (name == "T1") return PowerMean{4.0};
  if (name == "T2") return PowerMean{2.0};
  if (name == "T3") return PowerMean{1.0};
  if (name == "algorithm") return Iterative{};
  if (name == "determined") return Determined{};
  if (name == "poisson_k") return PoissonK{};
  if (name == "top_fraction" || name == "fixed" || name == "power_mean") {
    throw std::invalid_argument("method \"" + std::string(name) + "\" needs tuning values");
  }
  throw std::invalid_argument("unknown method \"" + std::string(name) + "\"");
}

ThresholdMethod parse_method(const json& j) {
  if (j.is_string()) return method_from_name(j.get<std::string>());
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string()) {
    throw std::invalid_argument("method must be a name or an object with a \"name\"");
  }
  const auto name = j["name"].get<std::string>();
  const std::string where = "method \"" + name + "\"";
  ThresholdMethod method;
  if (name == "T1" || name == "T2" || name == "T3" || name == "determined") {
    reject_unknown_keys(j, {"name"}, where);
    method = method_from_name(name);
  } else if (name == "power_mean") {
    reject_unknown_keys(j, {"name", "beta_exp"}, where);
    if (!j.contains("beta_exp")) throw std::invalid_argument(where + ": missing beta_exp");
    method = PowerMean{get_or(j, "beta_exp", 0.0)};
  } else if (name == "algorithm") {
    reject_unknown_keys(j, {"name", "eps", "max_iter"}, where);
    method = Iterative{get_or(j, "eps", 1e-6), get_or(j, "max_iter", 1000)};
  } else if (name == "top_fraction") {
    reject_unknown_keys(j, {"name", "alpha_frac"}, where);
    if (!j.contains("alpha_frac")) throw std::invalid_argument(where + ": missing alpha_frac");
    method = TopFraction{get_or(j, "alpha_frac", 0.0)};
  } else if (name == "poisson_k") {
    reject_unknown_keys(j, {"name", "alpha"}, where);
    method = PoissonK{get_or(j, "alpha", 0.5)};
  } else if (name == "fixed") {
    reject_unknown_keys(j, {"name", "c"}, where);
    if (!j.contains("c")) throw std::invalid_argument(where + ": missing c");
    method = FixedC{get_or(j, "c", 0.0)};
  } else {
    throw std::invalid_argument("unknown method \"" + name + "\"");
  }
  validate(method);
  return method;
}

ModelParams parse_params(const json& j) {
  reject_unknown_keys(j,
                      {"m", "beta", "p", "sigma0_sq", "tau_sq", "rho", "delta0", "deltaA",
                       "eps_sd", "rho1"},
                      "params");
  for (const char* key : {"m", "sigma0_sq", "tau_sq"}) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("params: missing \"") + key + "\"");
  }
  if (!j["m"].is_number_integer()) throw std::invalid_argument("params: m must be an integer");
  ModelParams p;
  p.m = j["m"].get<int>();
  if (j.contains("beta")) p.beta = get_or(j, "beta", 0.0);
  if (j.contains("p")) p.p = get_or(j, "p", 0.0);
  p.sigma0_sq = get_or(j, "sigma0_sq", 0.0);
  p.tau_sq = get_or(j, "tau_sq", 0.0);
  p.rho = get_or(j, "rho", 0.0);
  p.delta0 = get_or(j, "delta0", 1.0);
  p.deltaA = get_or(j, "deltaA", 1.0);
  p.eps_sd = get_or(j, "eps_sd", 0.0);
  p.rho1 = get_or(j, "rho1", 0.0);
  validate(p);
  return p;
}

std::vector<ExperimentCell> parse_config(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("config must be a JSON array of cells");
  std::vector<ExperimentCell> cells;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "cell " + std::to_string(i);
    try {
      const json& c = j[i];
      reject_unknown_keys(c, {"params", "methods", "reps", "oracle_grid_points"}, where);
      if (!c.contains("params")) throw std::invalid_argument("missing \"params\"");
      if (!c.contains("methods") || !c["methods"].is_array()) {
        throw std::invalid_argument("\"methods\" must be an array");
      }
      ExperimentCell cell;
      cell.params = parse_params(c["params"]);
      for (const auto& m : c["methods"]) cell.methods.push_back(parse_method(m));
      cell.reps = get_or(c, "reps", 1000);
      cell.oracle_grid_points = get_or(c, "oracle_grid_points", 1000);
      validate(cell);
      cells.push_back(std::move(cell));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + ": " + e.what());
    } catch (const json::exception& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
  }
  return cells;
}

std::vector<ExperimentCell> load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("invalid JSON in " + path.string() + ": " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace equicorr
