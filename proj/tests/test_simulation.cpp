#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ordcif/error.hpp"
#include "ordcif/estimators.hpp"
#include "ordcif/simulation.hpp"

using doctest::Approx;

namespace {

ordcif::SimConfig equal_hazards(int n, int replicates) {
  ordcif::SimConfig c;
  c.k = 3;
  c.cause_hazards = {1.0, 1.0, 1.0};
  c.n = n;
  c.replicates = replicates;
  c.seed = 314159;
  return c;
}

// sup_t |F_n(t) - (1 - exp(-lambda t))| for the observed lifetimes.
double lifetime_ks(const ordcif::Sample& s, double lambda) {
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t m = 0; m < s.size(); ++m) {
    const double cdf = -std::expm1(-lambda * s[m].time);
    d = std::max({d, std::abs(static_cast<double>(m + 1) / n - cdf), std::abs(static_cast<double>(m) / n - cdf)});
  }
  return d;
}

}  // namespace

TEST_CASE("truth CIFs") {
  ordcif::SimConfig c;
  c.k = 2;
  c.cause_hazards = {1.0, 1.0};
  CHECK(ordcif::truth_cif(c, 1, 0.0) == 0.0);
  CHECK(ordcif::truth_cif(c, 1, std::numbers::ln2 / 2.0) == Approx(0.25).epsilon(1e-15));
  CHECK(ordcif::truth_cif(c, 2, 1e3) == Approx(0.5).epsilon(1e-15));
  c.k = 3;
  c.cause_hazards = {1.0, 2.0, 3.0};
  CHECK(ordcif::truth_cif(c, 3, 1e3) == Approx(0.5).epsilon(1e-15));
  CHECK(c.median_time() == Approx(std::numbers::ln2 / 6.0));
}

TEST_CASE("tie sets") {
  ordcif::SimConfig c;
  c.k = 4;
  c.cause_hazards = {1.0, 2.0, 2.0, 3.0};
  CHECK(ordcif::tie_set(c, 1) == std::vector<int>{1});
  CHECK(ordcif::tie_set(c, 2) == std::vector<int>{2, 3});
  const Eigen::Vector4d z(0.3, 0.9, 0.1, -2.0);
  const Eigen::VectorXd p = ordcif::tie_block_projection(c, z);
  CHECK(p[0] == 0.3);
  CHECK(p[1] == Approx(0.5));
  CHECK(p[2] == Approx(0.5));
  CHECK(p[3] == -2.0);
}

TEST_CASE("generator is deterministic per replicate") {
  const auto c = equal_hazards(200, 1);
  CHECK(ordcif::simulate_sample(c, 7) == ordcif::simulate_sample(c, 7));
  CHECK_FALSE(ordcif::simulate_sample(c, 7) == ordcif::simulate_sample(c, 8));
  auto other = c;
  other.seed += 1;
  CHECK_FALSE(ordcif::simulate_sample(c, 7) == ordcif::simulate_sample(other, 7));
}

TEST_CASE("cause and censoring fractions") {
  ordcif::SimConfig c;
  c.k = 3;
  c.cause_hazards = {1.0, 2.0, 3.0};
  c.n = 100000;
  c.seed = 77;
  const auto s = ordcif::simulate_sample(c, 0);
  const double n = static_cast<double>(s.size());
  for (int j = 1; j <= 3; ++j) {
    const double p = j / 6.0;
    const double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(s.count(j) / n - p) <= 4.0 * se);
  }

  c.censor_rate = 2.0;
  const auto cs = ordcif::simulate_sample(c, 0);
  const double p = 2.0 / 8.0;
  CHECK(std::abs(cs.censored_count() / n - p) <= 4.0 * std::sqrt(p * (1.0 - p) / n));
}

TEST_CASE("lifetime distribution converges over an n ladder") {
  auto c = equal_hazards(100, 1);
  double prev = 1.0;
  for (int n : {100, 1600, 25600}) {
    c.n = n;
    double worst = 0.0;
    for (std::uint64_t r = 0; r < 20; ++r) worst += lifetime_ks(ordcif::simulate_sample(c, r), 3.0);
    worst /= 20.0;
    CHECK(worst < prev);
    CHECK(worst < 1.5 / std::sqrt(static_cast<double>(n)));
    prev = worst;
  }
}

TEST_CASE("equal hazards give exchangeable estimates") {
  const auto c = equal_hazards(200, 1);
  const double t = c.median_time();
  double diff12 = 0.0, diff13 = 0.0, sq = 0.0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    const Eigen::VectorXd x = ordcif::estimate_cifs(ordcif::simulate_sample(c, r)).at(t);
    diff12 += x[0] - x[1];
    diff13 += x[0] - x[2];
    sq += (x[0] - x[1]) * (x[0] - x[1]);
  }
  const double se = std::sqrt(sq / reps / reps);
  CHECK(std::abs(diff12 / reps) <= 4.0 * se);
  CHECK(std::abs(diff13 / reps) <= 4.0 * se);
}

TEST_CASE("configuration") {
  auto c = equal_hazards(50, 10);
  CHECK_NOTHROW(ordcif::validate(c));
  auto bad = c;
  bad.cause_hazards = {1.0, 0.0, 1.0};
  CHECK_THROWS_AS(ordcif::validate(bad), ordcif::Error);
  bad = c;
  bad.cause_hazards = {1.0, 1.0};
  CHECK_THROWS_AS(ordcif::validate(bad), ordcif::Error);
  bad = c;
  bad.cause = 4;
  CHECK_THROWS_AS(ordcif::validate(bad), ordcif::Error);

  c.t = 0.4;
  c.n_ladder = {10, 20, 40};
  const auto back = ordcif::config_from_json(nlohmann::json::parse(ordcif::to_json(c).dump()));
  CHECK(ordcif::to_json(back) == ordcif::to_json(c));

  const auto defaulted = ordcif::config_from_json(nlohmann::json::parse(R"({"k": 4})"));
  CHECK(defaulted.cause_hazards == std::vector<double>{1.0, 1.0, 1.0, 1.0});
  CHECK_THROWS_AS(ordcif::config_from_json(nlohmann::json::parse(R"({"k": "three"})")), ordcif::Error);
}

TEST_CASE("study preconditions") {
  auto c = equal_hazards(50, 10);
  c.cause_hazards = {1.0, 2.0, 3.0};
  try {
    ordcif::mc_dominance(c);
    FAIL("expected TieSetSingleton");
  } catch (const ordcif::Error& e) {
    CHECK(e.code() == ordcif::Errc::TieSetSingleton);
  }
  try {
    ordcif::mc_null_distribution(c);
    FAIL("expected NotNull");
  } catch (const ordcif::Error& e) {
    CHECK(e.code() == ordcif::Errc::NotNull);
  }
  c.n_ladder = {10, 10, 20};
  CHECK_THROWS_AS(ordcif::mc_consistency(c), ordcif::Error);
}

TEST_CASE("too few replicates are inconclusive") {
  const auto r = ordcif::mc_null_distribution(equal_hazards(50, 20));
  CHECK(r.verdict() == ordcif::Verdict::Inconclusive);
  CHECK(ordcif::to_json(r)["verdict"] == "inconclusive");
}

TEST_CASE("results do not depend on the thread count") {
  auto c = equal_hazards(60, 120);
  c.censor_rate = 0.5;
  const auto one = ordcif::to_json(ordcif::mc_covariance(c)).dump();
  c.threads = 3;
  CHECK(ordcif::to_json(ordcif::mc_covariance(c)).dump() == one);

  auto d = equal_hazards(60, 120);
  const auto a = ordcif::to_json(ordcif::mc_null_distribution(d)).dump();
  d.threads = 4;
  CHECK(ordcif::to_json(ordcif::mc_null_distribution(d)).dump() == a);
}

TEST_CASE("consistency study on a small ladder") {
  auto c = equal_hazards(50, 200);
  c.n_ladder = {50, 200, 800};
  const auto r = ordcif::mc_consistency(c);
  CHECK(r.verdict() == ordcif::Verdict::Pass);
  const auto medians = r.details["median_sup_error_restricted"].get<std::vector<double>>();
  REQUIRE(medians.size() == 3);
  CHECK(medians[2] < medians[0] / 2.0);
}

TEST_CASE("well separated hazards: restriction barely matters") {
  auto c = equal_hazards(400, 300);
  c.cause_hazards = {0.5, 1.5, 3.0};
  const auto r = ordcif::dominance_curves(c, 1, c.median_time());
  const auto star = r.details["p_abs_z_star_le_u"].get<std::vector<double>>();
  const auto raw = r.details["p_abs_z_le_u"].get<std::vector<double>>();
  for (std::size_t m = 0; m < star.size(); ++m) CHECK(std::abs(star[m] - raw[m]) <= 0.02);
}

TEST_CASE("fixed-t limit study") {
  SUBCASE("separated hazards: plain normal limit") {
    auto c = equal_hazards(400, 2000);
    c.cause_hazards = {0.5, 1.5, 3.0};
    c.reference_draws = 5000;
    const auto r = ordcif::mc_fixed_t_limit(c);
    CHECK(r.checks.size() == 27);
    CHECK(r.verdict() == ordcif::Verdict::Pass);
  }
  SUBCASE("equal hazards: projected normal limit") {
    auto c = equal_hazards(400, 2000);
    c.reference_draws = 5000;
    const auto r = ordcif::mc_fixed_t_limit(c);
    CHECK(r.verdict() == ordcif::Verdict::Pass);
  }
}
