#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ordcif/error.hpp"
#include "ordcif/estimators.hpp"
#include "ordcif/hypothesis_tests.hpp"
#include "ordcif/normal.hpp"
#include "ordcif/simulation.hpp"
#include "samples.hpp"

using doctest::Approx;

namespace {

// T_n computed by raw counting: at t = 0 and every distinct time, the cause
// counts give F_j(t) directly, no step functions involved.
double counting_statistic(const ordcif::Sample& s) {
  const int k = s.k();
  const double n = static_cast<double>(s.size());
  std::vector<double> counts(static_cast<std::size_t>(k) + 1, 0.0);
  double best = 0.0;
  auto scan = [&] {
    for (int j = 2; j <= k; ++j) {
      double avg = 0.0;
      for (int l = 1; l < j; ++l) avg += counts[static_cast<std::size_t>(l)];
      avg /= (j - 1);
      const double c = k * (j - 1.0) / j;
      best = std::max(best, std::sqrt(n * c) * (counts[static_cast<std::size_t>(j)] - avg) / n);
    }
  };
  scan();
  for (std::size_t m = 0; m < s.size();) {
    const double t = s[m].time;
    while (m < s.size() && s[m].time == t) counts[static_cast<std::size_t>(s[m++].cause.code)] += 1.0;
    scan();
  }
  return best;
}

// T_n* by a single pass over the sorted data: product-limit updates and the
// weighted increments accumulated in place.
double weighted_statistic(const ordcif::Sample& s) {
  const int k = s.k();
  const double n = static_cast<double>(s.size());
  std::vector<double> g(static_cast<std::size_t>(k) + 1, 0.0);
  double surv = 1.0, surv_c = 1.0, at_risk = n, best = 0.0;
  auto scan = [&] {
    for (int j = 2; j <= k; ++j) {
      double avg = 0.0;
      for (int l = 1; l < j; ++l) avg += g[static_cast<std::size_t>(l)];
      avg /= (j - 1);
      best = std::max(best, std::sqrt(n * k * (j - 1.0) / j) * (g[static_cast<std::size_t>(j)] - avg));
    }
  };
  scan();
  for (std::size_t m = 0; m < s.size();) {
    const double t = s[m].time;
    std::vector<double> d(static_cast<std::size_t>(k) + 1, 0.0);
    while (m < s.size() && s[m].time == t) d[static_cast<std::size_t>(s[m++].cause.code)] += 1.0;
    double events = 0.0;
    for (int l = 1; l <= k; ++l) {
      g[static_cast<std::size_t>(l)] += std::sqrt(surv_c) * surv * d[static_cast<std::size_t>(l)] / at_risk;
      events += d[static_cast<std::size_t>(l)];
    }
    surv *= (at_risk - events) / at_risk;
    const double at_risk_c = at_risk - events;
    if (at_risk_c > 0.0) surv_c *= (at_risk_c - d[0]) / at_risk_c;
    at_risk -= events + d[0];
    scan();
  }
  return best;
}

}  // namespace

TEST_CASE("standard normal distribution function") {
  CHECK(ordcif::std_normal_cdf(0.0) == 0.5);
  CHECK(std::abs(ordcif::std_normal_cdf(1.959964) - 0.975) <= 1e-6);
  CHECK(ordcif::std_normal_cdf(-40.0) < 1e-300);
  CHECK(ordcif::std_normal_cdf(40.0) == 1.0);
  double prev = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.01) {
    const double p = ordcif::std_normal_cdf(x);
    if (std::abs(x) <= 4.0) CHECK(std::abs(p - oracle::normal_cdf_series(x)) <= 1e-14);
    CHECK(p >= prev);
    prev = p;
    CHECK(ordcif::std_normal_sf(x) == Approx(1.0 - p).epsilon(1e-12));
    if (x > -5.99 && x < 4.0) CHECK(ordcif::std_normal_quantile(p) == Approx(x).epsilon(1e-10));
  }
  CHECK_THROWS_AS(ordcif::std_normal_quantile(0.0), ordcif::Error);
  CHECK_THROWS_AS(ordcif::std_normal_quantile(1.0), ordcif::Error);
}

TEST_CASE("asymptotic p-value") {
  CHECK(ordcif::asymptotic_pvalue(0.0, 3) == 1.0);
  CHECK(ordcif::asymptotic_pvalue(-1.0, 5) == 1.0);
  CHECK(std::abs(ordcif::asymptotic_pvalue(3.592, 3) - 0.00066) <= 2e-5);
  CHECK_THROWS_AS(ordcif::asymptotic_pvalue(1.0, 1), ordcif::Error);
  for (int i = 1; i <= 100; ++i) {
    const double t = 0.06 * i;
    const double two_sided = 2.0 * (1.0 - oracle::normal_cdf_series(t));
    CHECK(std::abs(ordcif::asymptotic_pvalue(t, 2) - two_sided) <= 1e-12);
  }
  for (int k = 2; k <= 6; ++k) {
    double prev = 1.0;
    for (double t = 0.05; t <= 8.0; t += 0.05) {
      const double p = ordcif::asymptotic_pvalue(t, k);
      CHECK(p < prev);
      CHECK(p < ordcif::asymptotic_pvalue(t, k + 1));
      prev = p;
    }
  }
}

TEST_CASE("subtest weights") {
  CHECK(ordcif::subtest_weight(3, 2) == 1.5);
  CHECK(ordcif::subtest_weight(3, 3) == 2.0);
  CHECK(ordcif::subtest_weight(2, 2) == 1.0);
}

TEST_CASE("two-point toy sample") {
  const std::vector<ordcif::Record> recs{{1.0, 1}, {2.0, 2}};
  const auto s = ordcif::build_sample(recs, 2);
  const auto r = ordcif::subtest_statistic(s, 2, false);
  CHECK(r.statistic == 0.0);
  CHECK(r.argmax == 0.0);
  const auto report = ordcif::ordered_test(s);
  CHECK(report.statistic == 0.0);
  CHECK(report.p_value == 1.0);
  CHECK_FALSE(report.censored);
  CHECK_THROWS_AS(ordcif::subtest_statistic(s, 1, false), ordcif::Error);
  CHECK_THROWS_AS(ordcif::subtest_statistic(s, 3, false), ordcif::Error);
}

TEST_CASE("all mass on the first cause") {
  const std::vector<ordcif::Record> recs{{1.0, 1}, {2.0, 1}, {3.0, 1}};
  const auto report = ordcif::ordered_test(ordcif::build_sample(recs, 3));
  CHECK(report.statistic == 0.0);
  CHECK(report.p_value >= 0.5);
}

TEST_CASE("statistic matches direct counting and the single-pass weighted form") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + trial % 4;
    const auto plain = fixtures::random_sample(rng, 10 + trial, k, 0.0);
    const auto report = ordcif::ordered_test(plain);
    CHECK(report.statistic == Approx(counting_statistic(plain)).epsilon(1e-12));
    CHECK(report.p_value >= 0.0);
    CHECK(report.p_value <= 1.0);

    // unit censoring weight: the weighted path reproduces the plain one exactly
    for (int j = 2; j <= k; ++j) {
      const auto a = ordcif::subtest_statistic(plain, j, false);
      const auto b = ordcif::subtest_statistic(plain, j, true);
      CHECK(a.statistic == b.statistic);
      CHECK(a.argmax == b.argmax);
    }

    const auto cens = fixtures::random_sample(rng, 10 + trial, k, 0.3);
    const auto cr = ordcif::ordered_test(cens);
    CHECK(cr.censored);
    CHECK(cr.statistic == Approx(weighted_statistic(cens)).epsilon(1e-12));
  }
}

TEST_CASE("the overall statistic is the largest subtest") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = fixtures::random_sample(rng, 60, 4, trial % 2 ? 0.25 : 0.0);
    const auto report = ordcif::ordered_test(s);
    double best = -1.0;
    for (const auto& sub : report.subtests) best = std::max(best, sub.statistic);
    CHECK(report.statistic == best);
    const auto& winner = report.subtests[static_cast<std::size_t>(report.argmax_j - 2)];
    CHECK(winner.statistic == report.statistic);
    CHECK(winner.argmax == report.argmax);
  }
}

TEST_CASE("refining the grid with midpoints does not change the sup") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 3;
    const auto s = fixtures::random_sample(rng, 40, k, 0.0);
    const auto set = ordcif::estimate_cifs(s);
    const double n = static_cast<double>(s.size());
    for (int j = 2; j <= k; ++j) {
      const auto r = ordcif::subtest_statistic(s, j, false);
      auto value = [&](double t) {
        double avg = 0.0;
        for (int l = 1; l < j; ++l) avg += set.cif(l)(t);
        avg /= (j - 1);
        return std::sqrt(n * ordcif::subtest_weight(k, j)) * (set.cif(j)(t) - avg);
      };
      double dense = value(0.0);
      const auto knots = ordcif::union_knots(set.cifs);
      for (std::size_t m = 0; m < knots.size(); ++m) {
        dense = std::max(dense, value(knots[m]));
        if (m + 1 < knots.size()) dense = std::max(dense, value(0.5 * (knots[m] + knots[m + 1])));
      }
      CHECK(r.statistic == Approx(dense).epsilon(1e-12));
    }
  }
}

TEST_CASE("under equal hazards the statistic is a contrast of centred processes") {
  ordcif::SimConfig cfg;
  cfg.k = 3;
  cfg.cause_hazards = {1.0, 1.0, 1.0};
  cfg.n = 300;
  cfg.seed = 2024;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto s = ordcif::simulate_sample(cfg, rep);
    const auto set = ordcif::estimate_cifs(s);
    const double n = static_cast<double>(s.size());
    for (int j = 2; j <= 3; ++j) {
      auto z = [&](int l, double t) { return std::sqrt(n) * (set.cif(l)(t) - ordcif::truth_cif(cfg, l, t)); };
      auto contrast = [&](double t) {
        double avg = 0.0;
        for (int l = 1; l < j; ++l) avg += z(l, t);
        return std::sqrt(ordcif::subtest_weight(3, j)) * (z(j, t) - avg / (j - 1));
      };
      double best = contrast(0.0);
      for (double t : ordcif::union_knots(set.cifs)) best = std::max(best, contrast(t));
      CHECK(ordcif::subtest_statistic(s, j, false).statistic == Approx(best).epsilon(1e-10));
    }
  }
}
