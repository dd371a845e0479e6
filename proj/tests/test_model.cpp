#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "equicorr/model.hpp"
#include "equicorr/normal.hpp"
#include "equicorr/scoring.hpp"
#include "support/moments.hpp"
#include "support/reference_normal.hpp"

using Catch::Approx;
using namespace equicorr;

namespace {

ModelParams make(int m, double beta, double sigma0_sq, double tau_sq, double rho = 0.0) {
  ModelParams p;
  p.m = m;
  p.beta = beta;
  p.sigma0_sq = sigma0_sq;
  p.tau_sq = tau_sq;
  p.rho = rho;
  return p;
}

ModelParams with_p(int m, double prob, double sigma0_sq = 1.0, double tau_sq = 15.0) {
  ModelParams p;
  p.m = m;
  p.p = prob;
  p.sigma0_sq = sigma0_sq;
  p.tau_sq = tau_sq;
  return p;
}

// Family-wise 3-sigma level (two-sided 0.0027) spread over `entries` z-scores.
double bonferroni_z(std::size_t entries) {
  return -stats::std_normal_quantile(0.0027 / (2.0 * static_cast<double>(entries)));
}

}  // namespace

TEST_CASE("resolve_p") {
  CHECK(resolve_p(make(100, 1.0, 1, 1)) == Approx(0.01).epsilon(1e-14));
  // exp(-beta ln 80) evaluated independently in extended precision.
  CHECK(resolve_p(make(80, 0.3, 1, 1)) == Approx(0.2685795884).margin(1e-9));
  CHECK(resolve_p(make(80, 0.7, 1, 1)) == Approx(0.0465411392).margin(1e-9));
  CHECK(resolve_p(with_p(10, 0.125)) == 0.125);

  ModelParams both = make(10, 0.5, 1, 1);
  both.p = 0.2;
  CHECK_THROWS_AS(resolve_p(both), std::invalid_argument);
  ModelParams neither = make(10, 0.5, 1, 1);
  neither.beta.reset();
  CHECK_THROWS_AS(resolve_p(neither), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate(make(80, 0.3, 1, 15, 0.7)));
  CHECK_NOTHROW(validate(make(80, 0.3, 1, 15, -0.00633)));
  CHECK_NOTHROW(validate(make(180, 0.3, 1, 15, -0.00279)));
  CHECK_NOTHROW(validate(make(80, 0.3, 1, 15, 1.0)));

  auto bad_rho = make(80, 0.3, 1, 15, -0.2);
  CHECK_THROWS_WITH(validate(bad_rho), Catch::Matchers::ContainsSubstring("rho") &&
                                           Catch::Matchers::ContainsSubstring("-0.0126582"));
  CHECK_THROWS_AS(validate(make(80, 0.3, 1, 15, 1.01)), std::invalid_argument);
  CHECK_THROWS_AS(validate(make(80, 0.3, 1, 15, -1.0 / 79.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate(make(0, 0.3, 1, 15)), std::invalid_argument);
  CHECK_THROWS_AS(validate(make(80, 0.3, 0.0, 15)), std::invalid_argument);
  CHECK_THROWS_AS(validate(make(80, 0.3, 1, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate(make(80, 1.5, 1, 15)), std::invalid_argument);
  CHECK_THROWS_AS(validate(with_p(10, 1.0)), std::invalid_argument);
  auto noisy = make(80, 0.3, 1, 15);
  noisy.eps_sd = -1.0;
  CHECK_THROWS_AS(validate(noisy), std::invalid_argument);
  noisy.eps_sd = 0.5;
  noisy.rho1 = -0.5;
  CHECK_THROWS_AS(validate(noisy), std::invalid_argument);
}

TEST_CASE("draw_signals") {
  Rng rng(1);
  SECTION("nearly degenerate priors") {
    for (int i = 0; i < 50; ++i) CHECK(draw_signals(with_p(10, 1e-12), rng).count() == 0);
    for (int i = 0; i < 50; ++i) CHECK(draw_signals(with_p(10, 0.999999), rng).count() == 10);
  }
  SECTION("empirical rate within 3 binomial standard errors") {
    const auto params = with_p(10000, 0.3);
    std::size_t ones = 0;
    for (int r = 0; r < 100; ++r) ones += draw_signals(params, rng).count();
    const double mean = static_cast<double>(ones) / 1e6;
    CHECK(std::abs(mean - 0.3) <= 3.0 * std::sqrt(0.3 * 0.7 / 1e6));
  }
}

TEST_CASE("draw_observations with a single coordinate is sigma * Z") {
  const auto params = with_p(1, 0.5, 2.0, 7.0);
  for (std::uint8_t bit : {std::uint8_t{0}, std::uint8_t{1}}) {
    Rng a(99);
    Rng b(99);
    const auto sample = draw_observations(params, SignalVector{{bit}}, a);
    std::normal_distribution<double> normal;
    const double sd = std::sqrt(bit ? 9.0 : 2.0);
    CHECK(sample.y[0] == sd * normal(b));
  }
}

TEST_CASE("draw_observations rejects mismatched signal vectors") {
  Rng rng(3);
  CHECK_THROWS_AS(draw_observations(with_p(5, 0.5), SignalVector{{1, 0}}, rng),
                  std::invalid_argument);
}

TEST_CASE("independent coordinates have variance sigma_i^2") {
  auto params = with_p(4, 0.5, 1.0, 15.0);
  const SignalVector nu{{1, 0, 1, 0}};
  Rng rng(2024);
  const int N = 100000;
  std::vector<double> sq(4, 0.0);
  for (int n = 0; n < N; ++n) {
    const auto s = draw_observations(params, nu, rng);
    for (int i = 0; i < 4; ++i) sq[i] += s.y[i] * s.y[i];
  }
  for (int i = 0; i < 4; ++i) {
    const double target = nu.bits[i] ? 16.0 : 1.0;
    const double se = target * std::sqrt(2.0 / N);
    INFO("coordinate " << i);
    CHECK(std::abs(sq[i] / N - target) <= 3.0 * se);
  }
}

TEST_CASE("equicorrelated nulls have correlation rho") {
  const auto params = make(80, 0.3, 1.0, 15.0, 0.7);
  const SignalVector nu{std::vector<std::uint8_t>(80, 0)};
  Rng rng(555);
  const int N = 100000;
  double s01 = 0, s00 = 0, s11 = 0;
  for (int n = 0; n < N; ++n) {
    const auto s = draw_observations(params, nu, rng);
    s01 += s.y[17] * s.y[63];
    s00 += s.y[17] * s.y[17];
    s11 += s.y[63] * s.y[63];
  }
  const double r = s01 / std::sqrt(s00 * s11);
  const double se = (1.0 - 0.49) / std::sqrt(static_cast<double>(N));
  CHECK(std::abs(r - 0.7) <= 3.0 * se);
}

TEST_CASE("sampler covariance including correlated noise and negative rho") {
  auto params = with_p(6, 0.5, 2.0, 6.0);
  params.rho = -0.15;
  params.eps_sd = 0.8;
  params.rho1 = 0.4;
  const SignalVector nu{{1, 0, 0, 1, 1, 0}};
  Rng rng(8080);
  const auto check = testing::check_covariance(params, nu, 100000, rng);
  INFO("max |z| = " << check.max_abs_z << ", beyond 3 SE: " << check.beyond_3se);
  CHECK(check.max_abs_z <= bonferroni_z(check.entries));
}

TEST_CASE("exchangeable coordinates share moments") {
  const auto params = make(5, 0.5, 1.0, 8.0, 0.3);
  const SignalVector nu{{1, 0, 0, 1, 0}};
  const SignalVector swapped{{0, 1, 0, 0, 1}};  // coordinates 0<->1 and 3<->4 exchanged
  Rng a(42);
  Rng b(43);
  const int N = 60000;
  double var0 = 0, var1_swapped = 0, cov01 = 0, cov10_swapped = 0;
  for (int n = 0; n < N; ++n) {
    const auto s = draw_observations(params, nu, a);
    const auto t = draw_observations(params, swapped, b);
    var0 += s.y[0] * s.y[0];
    var1_swapped += t.y[1] * t.y[1];
    cov01 += s.y[0] * s.y[3];
    cov10_swapped += t.y[1] * t.y[4];
  }
  // Var 9; Var of the difference of two independent estimates is 2 * 2 * 81 / N.
  CHECK(std::abs(var0 - var1_swapped) / N <= 3.0 * std::sqrt(4.0 * 81.0 / N));
  // Cov 0.3 * 9 = 2.7; per-estimate variance (81 + 2.7^2) / N.
  CHECK(std::abs(cov01 - cov10_swapped) / N <= 3.0 * std::sqrt(2.0 * (81.0 + 7.29) / N));
}

TEST_CASE("exact_risk boundaries and independent evaluation") {
  const auto params = make(80, 0.7, 1.0, 15.0);
  const double p = resolve_p(params);

  const auto at_zero = exact_risk(params, 0.0);
  CHECK(at_zero.t11.value() == 1.0);
  CHECK(at_zero.t21.value() == 0.0);
  CHECK(at_zero.risk == Approx(80.0 * (1.0 - p)).epsilon(1e-14));

  const auto at_inf = exact_risk(params, 1e6);
  CHECK(std::abs(at_inf.risk - 80.0 * p) <= 1e-9);

  const double c = determined_threshold(params);
  const auto r = exact_risk(params, c);
  const double t11 = static_cast<double>(testing::reference_abs_tail(c));
  const double t21 = 1.0 - static_cast<double>(testing::reference_abs_tail(c / 4.0));
  CHECK(r.t11.value() == Approx(t11).epsilon(1e-10));
  CHECK(r.t21.value() == Approx(t21).epsilon(1e-10));
  CHECK(r.expected_fp == Approx(80.0 * (1.0 - p) * t11).epsilon(1e-10));
  CHECK(r.expected_fn == Approx(80.0 * p * t21).epsilon(1e-10));
  CHECK(r.risk == Approx(2.2462).margin(1e-3));

  auto weighted = params;
  weighted.delta0 = 2.0;
  weighted.deltaA = 0.5;
  const auto w = exact_risk(weighted, 2.0);
  CHECK(w.risk == Approx(2.0 * w.expected_fp + 0.5 * w.expected_fn).epsilon(1e-14));

  CHECK_THROWS_AS(exact_risk(params, -0.5), std::invalid_argument);
}

TEST_CASE("table columns read as variances match the published determined column") {
  // Published determined total error for (m=80, beta=0.7, sigma0=1, tau=15, rho=0).
  const double published = 2.319;
  const auto as_variance = make(80, 0.7, 1.0, 15.0);
  const auto as_sd = make(80, 0.7, 1.0, 225.0);
  const double variance_reading = exact_risk(as_variance, determined_threshold(as_variance)).risk;
  const double sd_reading = exact_risk(as_sd, determined_threshold(as_sd)).risk;
  CHECK(variance_reading == Approx(2.25).margin(0.01));
  CHECK(sd_reading == Approx(0.72).margin(0.01));
  CHECK(std::abs(variance_reading - published) < std::abs(sd_reading - published));
}

TEST_CASE("expected fp and fn move in opposite directions with C") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto params = make(20 + static_cast<int>(u(gen) * 200), 0.1 + 0.9 * u(gen),
                             0.2 + 4.0 * u(gen), 0.5 + 100.0 * u(gen));
    double prev_fp = 1e300;
    double prev_fn = -1.0;
    for (double c = 0.0; c < 40.0; c += 0.37) {
      const auto r = exact_risk(params, c);
      CHECK(r.expected_fp <= prev_fp);
      CHECK(r.expected_fn >= prev_fn);
      prev_fp = r.expected_fp;
      prev_fn = r.expected_fn;
    }
  }
}

TEST_CASE("exact_risk agrees with Monte Carlo at any rho") {
  for (double rho : {0.0, 0.7}) {
    const auto params = make(80, 0.3, 1.0, 15.0, rho);
    const double c = 2.0;
    Rng rng(rho == 0.0 ? 10 : 11);
    const int N = 20000;
    double sum = 0.0, sum_sq = 0.0;
    for (int n = 0; n < N; ++n) {
      const auto trial = draw_trial(params, rng);
      const double l = loss(confusion(select(trial.y, c), trial.nu), 1.0, 1.0);
      sum += l;
      sum_sq += l * l;
    }
    const double mean = sum / N;
    const double se = std::sqrt((sum_sq / N - mean * mean) / (N - 1));
    INFO("rho = " << rho << " mean = " << mean << " se = " << se);
    CHECK(std::abs(mean - exact_risk(params, c).risk) <= 3.0 * se);
  }
}

TEST_CASE("approx_risk") {
  SECTION("closed form") {
    const auto params = make(80, 0.3, 2.0, 30.0);
    const double p = resolve_p(params);
    const auto a = approx_risk(params, 3.0);
    const double pi = 3.14159265358979323846;
    CHECK(a.U == Approx(2.0 * 80 * p / std::sqrt(2 * pi * 32.0)).epsilon(1e-14));
    CHECK(a.V == Approx(std::sqrt(2.0) * 80 * (1 - p) * std::sqrt(2.0 / pi)).epsilon(1e-14));
    CHECK(a.a == 0.25);
    CHECK(a.f_of_C == Approx(a.V / 3.0 * std::exp(-0.25 * 9.0) + a.U * 3.0).epsilon(1e-14));
  }

  SECTION("determined threshold zeroes the large-C derivative") {
    for (double tau_sq : {15.0, 90.0, 225.0}) {
      const auto params = make(80, 0.3, 1.0, tau_sq);
      const double c = determined_threshold(params);
      const auto a = approx_risk(params, c);
      CHECK(std::abs(a.U - 2.0 * a.a * a.V * std::exp(-a.a * c * c)) < 1e-9 * a.U);
    }
  }

  SECTION("Mills approximation tracks the exact risk where it applies") {
    const auto params = make(80, 0.3, 1.0, 90.0);
    const double c = determined_threshold(params);
    const double approx = approx_risk(params, c).f_of_C;
    const double exact = exact_risk(params, c).risk;
    CHECK(std::abs(approx - exact) / exact < 0.10);
  }

  SECTION("derivative nondecreasing in C") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const auto params = make(10 + static_cast<int>(u(gen) * 500), 0.05 + 0.95 * u(gen),
                               0.1 + 5.0 * u(gen), 0.1 + 200.0 * u(gen));
      double c1 = 0.05 + 20.0 * u(gen);
      double c2 = 0.05 + 20.0 * u(gen);
      if (c1 > c2) std::swap(c1, c2);
      CHECK(approx_risk(params, c1).fprime_of_C <= approx_risk(params, c2).fprime_of_C);
    }
  }

  CHECK_THROWS_AS(approx_risk(make(80, 0.3, 1, 15), 0.0), std::invalid_argument);
}

TEST_CASE("determined_threshold") {
  CHECK(determined_threshold(make(80, 0.3, 1.0, 225.0)) == Approx(2.7248).margin(1e-3));

  SECTION("homogeneous of degree 1/2 in the variances") {
    const auto base = make(80, 0.3, 1.5, 40.0);
    for (double k : {0.25, 2.0, 9.0}) {
      const auto scaled = make(80, 0.3, 1.5 * k, 40.0 * k);
      CHECK(determined_threshold(scaled) ==
            Approx(std::sqrt(k) * determined_threshold(base)).epsilon(1e-12));
    }
  }

  SECTION("dense regime has no positive threshold") {
    CHECK_THROWS_AS(determined_threshold(with_p(50, 0.9, 1.0, 1.0)), NoPositiveThreshold);
    // delta0 (1-p) = deltaA p with a vanishing tau leaves log(1) = 0.
    auto balanced = with_p(50, 0.5, 1.0, 1e-300);
    CHECK_THROWS_AS(determined_threshold(balanced), NoPositiveThreshold);
  }

  SECTION("near-optimal against a dense grid") {
    const auto params = make(180, 0.7, 1.0, 90.0);
    const double det = exact_risk(params, determined_threshold(params)).risk;
    double best = 1e300;
    const double hi = 10.0 * std::sqrt(91.0);
    for (int i = 0; i < 10000; ++i) best = std::min(best, exact_risk(params, hi * i / 9999.0).risk);
    CHECK(det <= 1.10 * best);
  }
}
