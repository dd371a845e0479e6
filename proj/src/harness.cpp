#include "equicorr/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "equicorr/oracle.hpp"
#include "equicorr/scoring.hpp"

namespace equicorr {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Outcome {
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct RepOutcome {
  std::vector<std::optional<Outcome>> methods;
  Outcome ideal;
};

MethodStats summarize(const std::vector<Outcome>& outcomes) {
  const auto n = static_cast<double>(outcomes.size());
  CompensatedSum fp;
  CompensatedSum fn;
  CompensatedSum total;
  for (const auto& o : outcomes) {
    fp.add(static_cast<double>(o.fp));
    fn.add(static_cast<double>(o.fn));
    total.add(static_cast<double>(o.fp + o.fn));
  }
  MethodStats s;
  s.mean_fp = fp.value() / n;
  s.mean_fn = fn.value() / n;
  s.mean_total_error = total.value() / n;
  if (outcomes.size() > 1) {
    CompensatedSum sq;
    for (const auto& o : outcomes) {
      const double d = static_cast<double>(o.fp + o.fn) - s.mean_total_error;
      sq.add(d * d);
    }
    s.se_total_error = std::sqrt(sq.value() / (n - 1.0) / n);
  }
  return s;
}

RepOutcome run_replication(const ExperimentCell& cell, std::uint64_t seed) {
  Rng rng(seed);
  const TrialSample trial = draw_trial(cell.params, rng);

  RepOutcome out;
  out.methods.reserve(cell.methods.size());
  for (const auto& method : cell.methods) {
    try {
      const double c = compute_threshold(method, trial.y, cell.params);
      const auto conf = confusion(select(trial.y, c), trial.nu);
      out.methods.push_back(Outcome{conf.fp, conf.fn});
    } catch (const std::exception&) {
      out.methods.push_back(std::nullopt);
    }
  }
  const auto oracle = ideal_threshold_grid(trial.y, trial.nu,
                                           static_cast<std::size_t>(cell.oracle_grid_points));
  const auto conf = confusion(select(trial.y, oracle.c_ideal), trial.nu);
  out.ideal = Outcome{conf.fp, conf.fn};
  return out;
}

}  // namespace

void validate(const ExperimentCell& cell) {
  validate(cell.params);
  if (cell.methods.empty()) throw std::invalid_argument("cell has no methods");
  for (const auto& method : cell.methods) validate(method);
  if (cell.reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (cell.oracle_grid_points < 2) throw std::invalid_argument("oracle_grid_points must be >= 2");
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t cell_ordinal,
                          std::uint64_t rep) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ cell_ordinal);
  return splitmix64(h ^ rep);
}

CellResult run_cell(const ExperimentCell& cell, std::uint64_t master_seed, int workers,
                    std::uint64_t cell_ordinal) {
  validate(cell);
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");

  const auto reps = static_cast<std::size_t>(cell.reps);
  std::vector<RepOutcome> outcomes(reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      try {
        outcomes[r] = run_replication(cell, derive_seed(master_seed, cell_ordinal, r));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), reps);
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  CellResult result;
  std::vector<Outcome> column;
  column.reserve(reps);
  for (const auto& o : outcomes) column.push_back(o.ideal);
  result.ideal = summarize(column);

  for (std::size_t k = 0; k < cell.methods.size(); ++k) {
    column.clear();
    bool missing = false;
    for (const auto& o : outcomes) {
      if (!o.methods[k]) {
        missing = true;
        break;
      }
      column.push_back(*o.methods[k]);
    }
    if (missing) {
      result.methods.emplace_back(std::nullopt);
      result.discrepancy.emplace_back(std::nullopt);
      continue;
    }
    const MethodStats stats = summarize(column);
    result.methods.emplace_back(stats);
    if (stats.mean_total_error > 0.0) {
      result.discrepancy.emplace_back(
          discrepancy_pct(stats.mean_total_error, result.ideal.mean_total_error));
    } else {
      result.discrepancy.emplace_back(std::nullopt);
    }
  }
  return result;
}

ExperimentTable run_grid(const std::vector<ExperimentCell>& config, std::uint64_t master_seed,
                         int workers) {
  if (config.empty()) throw std::invalid_argument("experiment config has no cells");
  std::ostringstream errors;
  bool bad = false;
  for (std::size_t i = 0; i < config.size(); ++i) {
    try {
      validate(config[i]);
    } catch (const std::exception& e) {
      errors << (bad ? "; " : "") << "cell " << i << ": " << e.what();
      bad = true;
    }
  }
  if (bad) throw std::invalid_argument(errors.str());

  ExperimentTable table;
  table.rows.reserve(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) {
    table.rows.push_back(TableRow{config[i], run_cell(config[i], master_seed, workers, i)});
  }
  return table;
}

std::vector<ExperimentCell> paper_grid(int reps, int oracle_grid_points) {
  const std::vector<ThresholdMethod> methods{PowerMean{4.0}, PowerMean{2.0}, PowerMean{1.0},
                                             Iterative{}, Determined{}};
  auto cell = [&](int m, double beta, double sigma0_col, double tau_col, double rho) {
    ExperimentCell c;
    c.params.m = m;
    c.params.beta = beta;
    c.params.sigma0_sq = kTableColumnsAreVariances ? sigma0_col : sigma0_col * sigma0_col;
    c.params.tau_sq = kTableColumnsAreVariances ? tau_col : tau_col * tau_col;
    c.params.rho = rho;
    c.methods = methods;
    c.reps = reps;
    c.oracle_grid_points = oracle_grid_points;
    return c;
  };

  std::vector<ExperimentCell> grid;
  for (int m : {80, 180}) {
    for (double beta : {0.3, 0.7}) {
      for (double sigma0 : {1.0, 3.0}) {
        for (double tau : {15.0, 90.0}) {
          for (double rho : {0.0, 0.1, 0.7}) grid.push_back(cell(m, beta, sigma0, tau, rho));
        }
      }
    }
  }
  for (int m : {80, 180}) {
    const double rho = m == 80 ? -0.00633 : -0.00279;
    for (double beta : {0.3, 0.7}) {
      for (double sigma0 : {1.0, 3.0}) {
        for (double tau : {15.0, 90.0}) grid.push_back(cell(m, beta, sigma0, tau, rho));
      }
    }
  }
  return grid;
}

}  // namespace equicorr
