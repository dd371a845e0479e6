#include "equicorr/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "equicorr/config.hpp"
#include "equicorr/csv.hpp"
#include "equicorr/harness.hpp"
#include "equicorr/model.hpp"
#include "equicorr/thresholds.hpp"

namespace equicorr {
namespace {

constexpr std::uint64_t kDefaultSeed = 12345;

std::uint64_t seed_from_env() {
  const char* env = std::getenv("EQUICORR_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  std::size_t used = 0;
  const std::string text(env);
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw std::invalid_argument("EQUICORR_SEED is not an unsigned integer");
  return value;
}

int default_workers() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

struct ModelFlags {
  int m = 0;
  std::optional<double> beta;
  std::optional<double> p;
  double sigma0_sq = 0.0;
  double tau_sq = 0.0;
  double rho = 0.0;
  double delta0 = 1.0;
  double deltaA = 1.0;

  void attach(CLI::App& app) {
    app.add_option("--m", m, "number of hypotheses")->required();
    auto* b = app.add_option("--beta", beta, "sparsity exponent, p = m^-beta");
    auto* pp = app.add_option("--p", p, "explicit signal probability");
    b->excludes(pp);
    app.add_option("--sigma0-sq", sigma0_sq, "null variance")->required();
    app.add_option("--tau-sq", tau_sq, "signal variance increment")->required();
    app.add_option("--rho", rho, "equicorrelation");
    app.add_option("--delta0", delta0, "false-positive loss");
    app.add_option("--deltaA", deltaA, "false-negative loss");
  }

  [[nodiscard]] ModelParams params() const {
    ModelParams mp;
    mp.m = m;
    mp.beta = beta;
    mp.p = p;
    mp.sigma0_sq = sigma0_sq;
    mp.tau_sq = tau_sq;
    mp.rho = rho;
    mp.delta0 = delta0;
    mp.deltaA = deltaA;
    validate(mp);
    return mp;
  }
};

std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file " + path);
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::replace(token.begin(), token.end(), ',', ' ');
    std::istringstream parts(token);
    double v = 0.0;
    while (parts >> v) values.push_back(v);
    if (!parts.eof()) throw std::runtime_error("non-numeric value in " + path);
  }
  if (values.empty()) throw std::runtime_error("no values in " + path);
  return values;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Threshold selection for equicorrelated Gaussian signal detection", "equicorr"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  int workers = default_workers();

  // run
  auto* run = app.add_subcommand("run", "run an experiment grid from a JSON config");
  std::string config_path;
  std::string out_path;
  std::optional<int> reps_override;
  run->add_option("--config", config_path, "JSON config")->required();
  run->add_option("--out", out_path, "CSV destination")->required();
  run->add_option("--seed", seed, "master seed (default: EQUICORR_SEED or 12345)");
  run->add_option("--reps", reps_override, "override every cell's replication count");
  run->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

  // reproduce-tables
  auto* reproduce = app.add_subcommand("reproduce-tables", "run the built-in grid");
  std::string out_dir;
  int table_reps = 1000;
  int grid_points = 1000;
  reproduce->add_option("--out", out_dir, "output directory")->required();
  reproduce->add_option("--seed", seed, "master seed (default: EQUICORR_SEED or 12345)");
  reproduce->add_option("--reps", table_reps, "replications per cell")->check(CLI::PositiveNumber);
  reproduce->add_option("--grid-points", grid_points, "ideal-threshold grid size");
  reproduce->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

  // risk
  auto* risk = app.add_subcommand("risk", "exact Bayes risk of a fixed threshold");
  ModelFlags risk_model;
  risk_model.attach(*risk);
  std::optional<double> risk_c;
  std::optional<int> curve_points;
  std::optional<double> curve_max;
  auto* c_opt = risk->add_option("--c", risk_c, "threshold");
  auto* curve_opt = risk->add_option("--curve", curve_points, "print the risk at N thresholds");
  risk->add_option("--c-max", curve_max, "largest threshold of the curve");
  c_opt->excludes(curve_opt);

  // threshold
  auto* threshold = app.add_subcommand("threshold", "compute the cut of one method");
  ModelFlags thr_model;
  thr_model.attach(*threshold);
  std::string method_text;
  std::optional<double> beta_exp;
  std::optional<double> eps;
  std::optional<int> max_iter;
  std::optional<double> alpha_frac;
  std::optional<double> alpha;
  std::optional<double> fixed_c;
  std::string y_file;
  threshold->add_option("--method", method_text,
                        "T1|T2|T3|power_mean|algorithm|determined|top_fraction|poisson_k|fixed")
      ->required();
  threshold->add_option("--beta-exp", beta_exp, "power_mean exponent");
  threshold->add_option("--eps", eps, "algorithm stopping tolerance");
  threshold->add_option("--max-iter", max_iter, "algorithm iteration cap");
  threshold->add_option("--alpha-frac", alpha_frac, "top_fraction share");
  threshold->add_option("--alpha", alpha, "poisson_k level");
  threshold->add_option("--c", fixed_c, "fixed threshold");
  threshold->add_option("--y-file", y_file,
                        "observations (whitespace or comma separated); simulated if absent");
  threshold->add_option("--seed", seed, "seed for the simulated observations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const std::uint64_t master_seed = seed ? *seed : seed_from_env();

    if (*run) {
      auto cells = load_config(config_path);
      if (reps_override) {
        if (*reps_override < 1) throw std::invalid_argument("--reps must be >= 1");
        for (auto& cell : cells) cell.reps = *reps_override;
      }
      write_csv(run_grid(cells, master_seed, workers), std::filesystem::path(out_path));
      return 0;
    }

    if (*reproduce) {
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      const auto table = run_grid(paper_grid(table_reps, grid_points), master_seed, workers);
      write_csv(table, dir / "total_error.csv");
      auto write_file = [&](const std::filesystem::path& path, auto writer) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
        writer(table, f);
        if (!f) throw std::runtime_error("write failed for " + path.string());
      };
      write_file(dir / "error_table.csv",
                 [](const ExperimentTable& t, std::ostream& o) { write_error_table(t, o); });
      write_file(dir / "discrepancy_table.csv",
                 [](const ExperimentTable& t, std::ostream& o) { write_discrepancy_table(t, o); });
      return 0;
    }

    if (*risk) {
      const ModelParams params = risk_model.params();
      if (risk_c) {
        out << format_number(exact_risk(params, *risk_c).risk) << '\n';
        return 0;
      }
      if (!curve_points || *curve_points < 2) {
        throw std::invalid_argument("risk needs --c X or --curve N with N >= 2");
      }
      const double hi = curve_max ? *curve_max : 10.0 * std::sqrt(params.sigma0_sq + params.tau_sq);
      if (!(hi > 0.0)) throw std::invalid_argument("--c-max must be > 0");
      out << "c,t11,t21,expected_fp,expected_fn,risk\n";
      for (int i = 0; i < *curve_points; ++i) {
        const double c = hi * i / (*curve_points - 1);
        const auto r = exact_risk(params, c);
        out << format_number(c) << ',' << format_number(r.t11) << ',' << format_number(r.t21)
            << ',' << format_number(r.expected_fp) << ',' << format_number(r.expected_fn) << ','
            << format_number(r.risk) << '\n';
      }
      return 0;
    }

    if (*threshold) {
      const ModelParams params = thr_model.params();
      ThresholdMethod method;
      if (method_text == "power_mean") {
        if (!beta_exp) throw std::invalid_argument("power_mean needs --beta-exp");
        method = PowerMean{*beta_exp};
      } else if (method_text == "algorithm") {
        method = Iterative{eps.value_or(1e-6), max_iter.value_or(1000)};
      } else if (method_text == "top_fraction") {
        if (!alpha_frac) throw std::invalid_argument("top_fraction needs --alpha-frac");
        method = TopFraction{*alpha_frac};
      } else if (method_text == "poisson_k") {
        method = PoissonK{alpha.value_or(0.5)};
      } else if (method_text == "fixed") {
        if (!fixed_c) throw std::invalid_argument("fixed needs --c");
        method = FixedC{*fixed_c};
      } else {
        method = method_from_name(method_text);
      }
      std::vector<double> y;
      if (!y_file.empty()) {
        y = read_values(y_file);
      } else {
        Rng rng(derive_seed(master_seed, 0, 0));
        y = draw_trial(params, rng).y;
      }
      out << format_number(compute_threshold(method, y, params)) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    err << "equicorr: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"equicorr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace equicorr
