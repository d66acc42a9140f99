#include "ordcif/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Cholesky>

#include "ordcif/error.hpp"
#include "ordcif/estimators.hpp"
#include "ordcif/hypothesis_tests.hpp"
#include "ordcif/inference.hpp"
#include "ordcif/isotonic.hpp"
#include "ordcif/normal.hpp"

namespace ordcif {
namespace {

// Independent stream per (seed, replicate); the same pair always yields the
// same draws.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t replicate) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replicate),
                      static_cast<std::uint32_t>(replicate >> 32)};
    engine_.seed(seq);
  }

  // Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// Replicate index reserved for the Gaussian reference draws of the fixed-t study.
constexpr std::uint64_t kReferenceStream = 0xFFFF'FFFF'0000'0000ULL;

double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t m = x.size() / 2;
  return x.size() % 2 == 1 ? x[m] : 0.5 * (x[m - 1] + x[m]);
}

// Standard error of the mean of x.
double mean_se(const std::vector<double>& x) {
  const double mu = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  const double r = static_cast<double>(x.size());
  return std::sqrt(ss / (r - 1.0) / r);
}

bool hazards_nondecreasing(const SimConfig& c) {
  return std::is_sorted(c.cause_hazards.begin(), c.cause_hazards.end());
}

// Sup over [0, tau] of |est - F_j|. The truth is continuous and increasing, so
// on each constancy interval of `est` the extreme deviation sits at an end.
double sup_error(const SimConfig& config, const StepFunction& est, int j, double tau) {
  double worst = std::abs(est(0.0));
  for (double u : est.knots()) {
    if (u > tau) break;
    const double f = truth_cif(config, j, u);
    worst = std::max({worst, std::abs(est.left_limit(u) - f), std::abs(est(u) - f)});
  }
  return std::max(worst, std::abs(est(tau) - truth_cif(config, j, tau)));
}

McCheck make_check(std::string name, double empirical, double theoretical, double se,
                   double tolerance, bool passed) {
  return {std::move(name), empirical, theoretical, se, tolerance, passed};
}

McCheck within_se(std::string name, double empirical, double theoretical, double se, double n_se) {
  const double tol = n_se * se;
  return make_check(std::move(name), empirical, theoretical, se, tol,
                    std::abs(empirical - theoretical) <= tol);
}

template <typename Integrand>
double simpson(Integrand&& f, double a, double b, int intervals = 2000) {
  if (b <= a) return 0.0;
  const double h = (b - a) / intervals;
  double acc = f(a) + f(b);
  for (int m = 1; m < intervals; ++m) acc += f(a + m * h) * (m % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

std::vector<double> default_u_grid() {
  std::vector<double> u;
  for (int m = 1; m <= 20; ++m) u.push_back(0.1 * m);
  return u;
}

}  // namespace

double SimConfig::total_hazard() const {
  double s = 0.0;
  for (double h : cause_hazards) s += h;
  return s;
}

double SimConfig::median_time() const { return std::numbers::ln2 / total_hazard(); }

void validate(const SimConfig& c) {
  auto bad = [](const std::string& what) { throw Error(Errc::BadConfig, what); };
  if (c.k < 2) bad("k must be at least 2");
  if (static_cast<int>(c.cause_hazards.size()) != c.k) bad("cause_hazards must have k entries");
  for (double h : c.cause_hazards) {
    if (!(h > 0.0) || !std::isfinite(h)) bad("cause hazards must be positive and finite");
  }
  if (!(c.censor_rate >= 0.0) || !std::isfinite(c.censor_rate)) bad("censor_rate must be >= 0");
  if (c.n < 1) bad("n must be positive");
  if (c.replicates < 1) bad("replicates must be positive");
  if (c.t && !(*c.t > 0.0 && std::isfinite(*c.t))) bad("t must be positive");
  if (c.cause < 1 || c.cause > c.k) bad("cause outside 1..k");
  for (auto [i, j] : c.cov_pairs) {
    if (i < 1 || i > c.k || j < 1 || j > c.k) bad("cov_pairs entry outside 1..k");
  }
  for (double t : c.eval_times) {
    if (!(t > 0.0) || !std::isfinite(t)) bad("eval_times must be positive");
  }
  for (double u : c.u_grid) {
    if (!(u > 0.0)) bad("u_grid must be positive");
  }
  if (!(c.tolerance_se > 0.0) || !(c.dominance_se >= 0.0) || !(c.max_kolmogorov > 0.0)) {
    bad("tolerances must be positive");
  }
  if (c.reference_draws < 100) bad("reference_draws must be at least 100");
  if (c.threads < 1) bad("threads must be positive");
}

SimConfig config_from_json(const nlohmann::json& j) {
  SimConfig c;
  try {
    c.k = j.value("k", c.k);
    if (j.contains("cause_hazards")) {
      c.cause_hazards = j.at("cause_hazards").get<std::vector<double>>();
    } else {
      c.cause_hazards.assign(static_cast<std::size_t>(c.k), 1.0);
    }
    c.censor_rate = j.value("censor_rate", c.censor_rate);
    c.n = j.value("n", c.n);
    c.replicates = j.value("replicates", c.replicates);
    c.seed = j.value("seed", c.seed);
    c.eval_times = j.value("eval_times", c.eval_times);
    c.n_ladder = j.value("n_ladder", c.n_ladder);
    if (j.contains("t") && !j.at("t").is_null()) c.t = j.at("t").get<double>();
    c.u_grid = j.value("u_grid", c.u_grid);
    c.cause = j.value("cause", c.cause);
    if (j.contains("cov_pairs")) {
      c.cov_pairs.clear();
      for (const auto& p : j.at("cov_pairs")) c.cov_pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    }
    c.tolerance_se = j.value("tolerance_se", c.tolerance_se);
    c.dominance_se = j.value("dominance_se", c.dominance_se);
    c.max_kolmogorov = j.value("max_kolmogorov", c.max_kolmogorov);
    c.reference_draws = j.value("reference_draws", c.reference_draws);
    c.threads = j.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadConfig, e.what());
  }
  validate(c);
  return c;
}

nlohmann::ordered_json to_json(const SimConfig& c) {
  nlohmann::ordered_json j;
  j["k"] = c.k;
  j["cause_hazards"] = c.cause_hazards;
  j["censor_rate"] = c.censor_rate;
  j["n"] = c.n;
  j["replicates"] = c.replicates;
  j["seed"] = c.seed;
  j["eval_times"] = c.eval_times;
  j["n_ladder"] = c.n_ladder;
  j["t"] = c.t ? nlohmann::ordered_json(*c.t) : nlohmann::ordered_json(nullptr);
  j["u_grid"] = c.u_grid;
  j["cause"] = c.cause;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (auto [a, b] : c.cov_pairs) pairs.push_back({a, b});
  j["cov_pairs"] = pairs;
  j["tolerance_se"] = c.tolerance_se;
  j["dominance_se"] = c.dominance_se;
  j["max_kolmogorov"] = c.max_kolmogorov;
  j["reference_draws"] = c.reference_draws;
  return j;
}

double truth_cif(const SimConfig& config, int j, double t) {
  const double lambda = config.total_hazard();
  if (t <= 0.0) return 0.0;
  return config.cause_hazards[static_cast<std::size_t>(j - 1)] / lambda * -std::expm1(-lambda * t);
}

std::vector<int> tie_set(const SimConfig& config, int i) {
  std::vector<int> out;
  const double hi = config.cause_hazards[static_cast<std::size_t>(i - 1)];
  for (int j = 1; j <= config.k; ++j) {
    if (config.cause_hazards[static_cast<std::size_t>(j - 1)] == hi) out.push_back(j);
  }
  return out;
}

double truth_covariance(const SimConfig& config, int i, int j, double s, double t) {
  if (s > t) return truth_covariance(config, j, i, t, s);
  const int k = config.k;
  const double lambda = config.total_hazard();
  const double c = config.censor_rate;
  const auto& h = config.cause_hazards;
  auto F = [&](int l, double u) { return truth_cif(config, l, u); };
  auto others = [&](int skip, double u) {
    double acc = 0.0;
    for (int l = 1; l <= k; ++l) {
      if (l != skip) acc += F(l, u);
    }
    return acc;
  };
  // dLambda_l(u) / pi(u) = lambda_l exp((lambda + c) u) du
  auto rate = [&](int l, double u) { return h[static_cast<std::size_t>(l - 1)] * std::exp((lambda + c) * u); };
  const double fi_s = F(i, s);
  const double fi_t = F(i, t);
  const double fj_t = F(j, t);

  auto integrand = [&](double u) {
    double acc = 0.0;
    if (i == j) {
      acc += (1.0 - fi_s - others(i, u)) * (1.0 - fi_t - others(i, u)) * rate(i, u);
      for (int l = 1; l <= k; ++l) {
        if (l != i) acc += (F(i, u) - fi_s) * (F(i, u) - fi_t) * rate(l, u);
      }
    } else {
      acc += (1.0 - fi_s - others(i, u)) * (F(j, u) - fj_t) * rate(i, u);
      acc += (1.0 - fj_t - others(j, u)) * (F(i, u) - fi_s) * rate(j, u);
      for (int l = 1; l <= k; ++l) {
        if (l != i && l != j) acc += (fi_s - F(i, u)) * (fj_t - F(j, u)) * rate(l, u);
      }
    }
    return acc;
  };
  return simpson(integrand, 0.0, s);
}

Sample simulate_sample(const SimConfig& config, std::uint64_t replicate_index) {
  validate(config);
  Stream rng(config.seed, replicate_index);
  const double lambda = config.total_hazard();
  std::vector<Record> records;
  records.reserve(static_cast<std::size_t>(config.n));
  for (int i = 0; i < config.n; ++i) {
    const double life = -std::log(rng.uniform()) / lambda;
    double pick = rng.uniform() * lambda;
    int cause = config.k;
    for (int j = 1; j <= config.k; ++j) {
      pick -= config.cause_hazards[static_cast<std::size_t>(j - 1)];
      if (pick < 0.0) {
        cause = j;
        break;
      }
    }
    if (config.censor_rate > 0.0) {
      const double censor = -std::log(rng.uniform()) / config.censor_rate;
      if (censor < life) {
        records.emplace_back(censor, 0);
        continue;
      }
    }
    records.emplace_back(life, cause);
  }
  return build_sample(records, config.k);
}

Eigen::VectorXd tie_block_projection(const SimConfig& config, const Eigen::VectorXd& z) {
  Eigen::VectorXd out(z.size());
  Eigen::Index start = 0;
  const auto& h = config.cause_hazards;
  while (start < z.size()) {
    Eigen::Index stop = start + 1;
    while (stop < z.size() && h[static_cast<std::size_t>(stop)] == h[static_cast<std::size_t>(start)]) ++stop;
    out.segment(start, stop - start) = isotonic_project(z.segment(start, stop - start));
    start = stop;
  }
  return out;
}

Verdict McReport::verdict() const {
  if (replicates < 100) return Verdict::Inconclusive;
  for (const auto& c : checks) {
    if (!c.passed) return Verdict::Fail;
  }
  return Verdict::Pass;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

nlohmann::ordered_json to_json(const McReport& report) {
  nlohmann::ordered_json j;
  j["study"] = report.study;
  j["verdict"] = std::string(to_string(report.verdict()));
  j["replicates"] = report.replicates;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json row;
    row["name"] = c.name;
    row["empirical"] = c.empirical;
    row["theoretical"] = c.theoretical;
    row["mc_se"] = c.mc_se;
    row["tolerance"] = c.tolerance;
    row["passed"] = c.passed;
    checks.push_back(std::move(row));
  }
  j["checks"] = std::move(checks);
  j["details"] = report.details;
  return j;
}

McReport mc_consistency(const SimConfig& config) {
  validate(config);
  if (config.n_ladder.size() < 3) throw Error(Errc::BadConfig, "consistency needs at least 3 sample sizes");
  for (std::size_t m = 0; m < config.n_ladder.size(); ++m) {
    if (config.n_ladder[m] < 1 || (m > 0 && config.n_ladder[m] <= config.n_ladder[m - 1])) {
      throw Error(Errc::BadConfig, "n_ladder must be positive and strictly increasing");
    }
  }

  struct Replicate {
    double restricted = 0.0;
    double unrestricted = 0.0;
    int contraction_violations = 0;
  };

  McReport report;
  report.study = "consistency";
  report.replicates = config.replicates;
  std::vector<double> medians_restricted, medians_unrestricted;
  int violations = 0;

  for (std::size_t rung = 0; rung < config.n_ladder.size(); ++rung) {
    SimConfig c = config;
    c.n = config.n_ladder[rung];
    // distinct replicate indices per rung keep the rungs independent
    const std::uint64_t offset = static_cast<std::uint64_t>(rung) << 32;
    const auto results = run_replicates(config.replicates, config.threads, [&](std::uint64_t r) {
      const Sample sample = simulate_sample(c, offset + r);
      const CifSet raw = estimate_cifs(sample);
      const CifSet iso = restrict_cifs(raw);
      const double tau = sample.tau();
      Replicate out;
      for (int j = 1; j <= c.k; ++j) {
        out.restricted = std::max(out.restricted, sup_error(c, iso.cif(j), j, tau));
        out.unrestricted = std::max(out.unrestricted, sup_error(c, raw.cif(j), j, tau));
      }
      std::vector<double> probe = union_knots(raw.cifs);
      for (double u : probe) {
        Eigen::VectorXd truth(c.k);
        for (int j = 1; j <= c.k; ++j) truth[j - 1] = truth_cif(c, j, u);
        for (bool left : {true, false}) {
          Eigen::VectorXd a(c.k), b(c.k);
          for (int j = 1; j <= c.k; ++j) {
            a[j - 1] = left ? iso.cif(j).left_limit(u) : iso.cif(j)(u);
            b[j - 1] = left ? raw.cif(j).left_limit(u) : raw.cif(j)(u);
          }
          if ((a - truth).cwiseAbs().maxCoeff() > (b - truth).cwiseAbs().maxCoeff()) {
            ++out.contraction_violations;
          }
        }
      }
      return out;
    });

    std::vector<double> restricted, unrestricted;
    for (const auto& r : results) {
      restricted.push_back(r.restricted);
      unrestricted.push_back(r.unrestricted);
      violations += r.contraction_violations;
      if (r.restricted > r.unrestricted) ++violations;
    }
    medians_restricted.push_back(median(restricted));
    medians_unrestricted.push_back(median(unrestricted));
  }

  for (std::size_t m = 1; m < medians_restricted.size(); ++m) {
    report.checks.push_back(make_check(
        "median_sup_error_decreases_n" + std::to_string(config.n_ladder[m - 1]) + "_to_n" +
            std::to_string(config.n_ladder[m]),
        medians_restricted[m], medians_restricted[m - 1], 0.0, 0.0,
        medians_restricted[m] < medians_restricted[m - 1]));
  }
  report.checks.push_back(make_check("restricted_error_contraction_violations",
                                     static_cast<double>(violations), 0.0, 0.0, 0.0, violations == 0));
  report.details["n_ladder"] = config.n_ladder;
  report.details["median_sup_error_restricted"] = medians_restricted;
  report.details["median_sup_error_unrestricted"] = medians_unrestricted;
  return report;
}

McReport mc_null_distribution(const SimConfig& config) {
  validate(config);
  for (double h : config.cause_hazards) {
    if (h != config.cause_hazards.front()) {
      throw Error(Errc::NotNull, "null calibration requires equal cause hazards");
    }
  }
  const auto stats = run_replicates(config.replicates, config.threads, [&](std::uint64_t r) {
    return ordered_test(simulate_sample(config, r)).statistic;
  });
  std::vector<double> sorted = stats;
  std::sort(sorted.begin(), sorted.end());
  const double reps = static_cast<double>(sorted.size());

  McReport report;
  report.study = "null";
  report.replicates = config.replicates;

  // Deciles of the limit law: P(T >= t_q) = q.
  std::vector<double> levels, points, empirical;
  double decile_distance = 0.0;
  for (int d = 1; d <= 9; ++d) {
    const double q = 0.1 * d;
    const double inner = std::pow(1.0 - q, 1.0 / static_cast<double>(config.k - 1));
    const double tq = std_normal_quantile(0.5 * (1.0 + inner));
    const auto at_or_above = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), tq);
    const double emp = static_cast<double>(at_or_above) / reps;
    levels.push_back(q);
    points.push_back(tq);
    empirical.push_back(emp);
    decile_distance = std::max(decile_distance, std::abs(emp - q));
  }

  // Full Kolmogorov distance against the limit distribution function.
  double full_distance = 0.0;
  for (std::size_t m = 0; m < sorted.size(); ++m) {
    const double cdf = 1.0 - asymptotic_pvalue(sorted[m], config.k);
    full_distance = std::max({full_distance, std::abs(static_cast<double>(m + 1) / reps - cdf),
                              std::abs(static_cast<double>(m) / reps - cdf)});
  }

  report.checks.push_back(make_check("kolmogorov_distance_at_deciles", decile_distance, 0.0, 0.0,
                                     config.max_kolmogorov, decile_distance <= config.max_kolmogorov));
  report.details["censored"] = config.censor_rate > 0.0;
  report.details["decile_levels"] = levels;
  report.details["decile_points"] = points;
  report.details["empirical_survival"] = empirical;
  report.details["kolmogorov_distance_full"] = full_distance;
  report.details["mean_statistic"] = mean(stats);
  return report;
}

McReport dominance_curves(const SimConfig& config, int cause, double t) {
  validate(config);
  const double f = truth_cif(config, cause, t);
  if (!(f > 0.0 && f < 1.0)) throw Error(Errc::BadConfig, "need 0 < F_i(t) < 1");
  const double root_n = std::sqrt(static_cast<double>(config.n));

  struct Draw {
    double z = 0.0;
    double z_star = 0.0;
  };
  const auto draws = run_replicates(config.replicates, config.threads, [&](std::uint64_t r) {
    const CifSet raw = estimate_cifs(simulate_sample(config, r));
    const Eigen::VectorXd x = raw.at(t);
    const Eigen::VectorXd p = isotonic_project(x);
    return Draw{root_n * (x[cause - 1] - f), root_n * (p[cause - 1] - f)};
  });

  const std::vector<double> grid = config.u_grid.empty() ? default_u_grid() : config.u_grid;
  McReport report;
  report.study = "dominance";
  report.replicates = config.replicates;
  std::vector<double> p_star, p_raw;
  for (double u : grid) {
    std::vector<double> diff;
    diff.reserve(draws.size());
    double a = 0.0, b = 0.0;
    for (const auto& d : draws) {
      const double in_star = std::abs(d.z_star) <= u ? 1.0 : 0.0;
      const double in_raw = std::abs(d.z) <= u ? 1.0 : 0.0;
      a += in_star;
      b += in_raw;
      diff.push_back(in_star - in_raw);
    }
    a /= static_cast<double>(draws.size());
    b /= static_cast<double>(draws.size());
    p_star.push_back(a);
    p_raw.push_back(b);
    const double se = mean_se(diff);
    const double tol = config.dominance_se * se;
    report.checks.push_back(make_check("starred_dominates_u" + std::to_string(u).substr(0, 4), a, b, se,
                                       tol, a >= b - tol));
  }
  std::vector<double> sq_star, sq_raw;
  for (const auto& d : draws) {
    sq_star.push_back(d.z_star * d.z_star);
    sq_raw.push_back(d.z * d.z);
  }
  const double m_star = mean(sq_star);
  const double m_raw = mean(sq_raw);
  report.checks.push_back(make_check("second_moment_reduced", m_star, m_raw, 0.0, 0.0, m_star < m_raw));
  report.details["cause"] = cause;
  report.details["t"] = t;
  report.details["tie_set"] = tie_set(config, cause);
  report.details["u_grid"] = grid;
  report.details["p_abs_z_star_le_u"] = p_star;
  report.details["p_abs_z_le_u"] = p_raw;
  report.details["mean_z_star_sq"] = m_star;
  report.details["mean_z_sq"] = m_raw;
  return report;
}

McReport mc_dominance(const SimConfig& config) {
  validate(config);
  if (!hazards_nondecreasing(config)) throw Error(Errc::BadConfig, "cause hazards must be nondecreasing");
  if (tie_set(config, config.cause).size() < 2) {
    throw Error(Errc::TieSetSingleton, "cause " + std::to_string(config.cause) +
                                           " has no tied CIF; the dominance result does not apply");
  }
  return dominance_curves(config, config.cause, config.time_or_median());
}

McReport mc_fixed_t_limit(const SimConfig& config) {
  validate(config);
  if (!hazards_nondecreasing(config)) throw Error(Errc::BadConfig, "cause hazards must be nondecreasing");
  const double t = config.time_or_median();
  const int k = config.k;
  Eigen::VectorXd truth(k);
  for (int j = 1; j <= k; ++j) truth[j - 1] = truth_cif(config, j, t);
  if (!(truth.sum() > 0.0 && truth.sum() < 1.0)) throw Error(Errc::BadConfig, "need 0 < F(t) < 1");

  Eigen::MatrixXd cov(k, k);
  for (int a = 1; a <= k; ++a) {
    for (int b = 1; b <= k; ++b) {
      cov(a - 1, b - 1) = config.censor_rate > 0.0
                              ? truth_covariance(config, a, b, t, t)
                              : cov_uncensored(truth[a - 1], truth[b - 1], a == b);
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw Error(Errc::BadConfig, "limit covariance is not positive definite");
  const Eigen::MatrixXd chol = llt.matrixL();

  // Reference law: tie-block max-min functional of N(0, cov).
  Stream ref_rng(config.seed, kReferenceStream);
  Eigen::MatrixXd reference(k, config.reference_draws);
  for (int r = 0; r < config.reference_draws; ++r) {
    Eigen::VectorXd e(k);
    for (int a = 0; a < k; ++a) e[a] = ref_rng.normal();
    reference.col(r) = tie_block_projection(config, chol * e);
  }

  const double root_n = std::sqrt(static_cast<double>(config.n));
  const auto pipeline = run_replicates(config.replicates, config.threads, [&](std::uint64_t r) {
    const CifSet raw = estimate_cifs(simulate_sample(config, r));
    return Eigen::VectorXd(root_n * (isotonic_project(raw.at(t)) - truth));
  });

  McReport report;
  report.study = "fixed-t";
  report.replicates = config.replicates;
  const double reps = static_cast<double>(config.replicates);
  const double refs = static_cast<double>(config.reference_draws);
  nlohmann::ordered_json per_cause = nlohmann::ordered_json::array();
  for (int a = 0; a < k; ++a) {
    std::vector<double> ref_row(reference.row(a).begin(), reference.row(a).end());
    std::sort(ref_row.begin(), ref_row.end());
    std::vector<double> emp_row;
    for (const auto& z : pipeline) emp_row.push_back(z[a]);
    std::sort(emp_row.begin(), emp_row.end());

    std::vector<double> ref_q, emp_q;
    for (int d = 1; d <= 9; ++d) {
      const double q = 0.1 * d;
      const auto idx = static_cast<std::size_t>(q * (refs - 1.0));
      const double xq = ref_row[idx];
      const double p_ref = static_cast<double>(std::upper_bound(ref_row.begin(), ref_row.end(), xq) -
                                               ref_row.begin()) / refs;
      // Unrestricted estimates live on a lattice of step 1/sqrt(n); averaging
      // the indicator over a uniform jitter of that width removes the
      // staircase bias against the continuous reference.
      double p_emp = 0.0;
      for (double z : emp_row) p_emp += std::clamp((xq - z) * root_n + 0.5, 0.0, 1.0);
      p_emp /= reps;
      const double se = std::sqrt(p_ref * (1.0 - p_ref) * (1.0 / reps + 1.0 / refs));
      report.checks.push_back(within_se("cause" + std::to_string(a + 1) + "_decile" + std::to_string(d),
                                        p_emp, p_ref, se, config.tolerance_se));
      ref_q.push_back(xq);
      emp_q.push_back(emp_row[static_cast<std::size_t>(q * (reps - 1.0))]);
    }
    nlohmann::ordered_json row;
    row["cause"] = a + 1;
    row["reference_deciles"] = ref_q;
    row["empirical_deciles"] = emp_q;
    per_cause.push_back(std::move(row));
  }
  report.details["t"] = t;
  report.details["censored"] = config.censor_rate > 0.0;
  report.details["deciles"] = std::move(per_cause);
  return report;
}

McReport mc_covariance(const SimConfig& config) {
  validate(config);
  std::vector<double> times = config.eval_times;
  if (times.empty()) {
    for (double p : {0.25, 0.5, 0.75}) times.push_back(-std::log1p(-p) / config.total_hazard());
  }
  const bool censored = config.censor_rate > 0.0;
  const double root_n = std::sqrt(static_cast<double>(config.n));

  struct Query {
    int i, j;
    double s, t;
  };
  std::vector<Query> queries;
  std::vector<std::pair<int, int>> pairs = config.cov_pairs;
  if (pairs.empty()) pairs = {{1, 1}, {1, config.k}};
  for (auto [i, j] : pairs) {
    for (double s : times) {
      for (double t : times) queries.push_back({i, j, s, t});
    }
  }

  struct Draw {
    Eigen::MatrixXd z;       // z(j - 1, m) = Z_j(times[m])
    Eigen::VectorXd plugin;  // per query
  };
  const auto draws = run_replicates(config.replicates, config.threads, [&](std::uint64_t r) {
    const Sample sample = simulate_sample(config, r);
    Draw d;
    d.z.resize(config.k, static_cast<Eigen::Index>(times.size()));
    const PluginFit fit = fit_plugin(sample);
    for (std::size_t m = 0; m < times.size(); ++m) {
      for (int j = 1; j <= config.k; ++j) {
        d.z(j - 1, static_cast<Eigen::Index>(m)) =
            root_n * (fit.cifs.cif(j)(times[m]) - truth_cif(config, j, times[m]));
      }
    }
    if (censored) {
      d.plugin.resize(static_cast<Eigen::Index>(queries.size()));
      for (std::size_t q = 0; q < queries.size(); ++q) {
        const auto& qu = queries[q];
        const CovQuery cq = qu.s <= qu.t ? CovQuery{qu.i, qu.j, qu.s, qu.t} : CovQuery{qu.j, qu.i, qu.t, qu.s};
        d.plugin[static_cast<Eigen::Index>(q)] = cov_censored_plugin(fit, cq);
      }
    }
    return d;
  });

  McReport report;
  report.study = "covariance";
  report.replicates = config.replicates;
  auto index_of = [&](double v) {
    return static_cast<Eigen::Index>(std::find(times.begin(), times.end(), v) - times.begin());
  };
  nlohmann::ordered_json truth_rows = nlohmann::ordered_json::array();
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto& qu = queries[q];
    const Eigen::Index ms = index_of(qu.s);
    const Eigen::Index mt = index_of(qu.t);
    std::vector<double> x, y;
    for (const auto& d : draws) {
      x.push_back(d.z(qu.i - 1, ms));
      y.push_back(d.z(qu.j - 1, mt));
    }
    const double mx = mean(x);
    const double my = mean(y);
    std::vector<double> prod;
    for (std::size_t r = 0; r < x.size(); ++r) prod.push_back((x[r] - mx) * (y[r] - my));
    const double reps = static_cast<double>(prod.size());
    const double empirical = mean(prod) * reps / (reps - 1.0);
    const double se = mean_se(prod);

    double reference = 0.0;
    if (censored) {
      std::vector<double> plug;
      for (const auto& d : draws) plug.push_back(d.plugin[static_cast<Eigen::Index>(q)]);
      reference = mean(plug);
    } else if (qu.s <= qu.t) {
      reference = cov_uncensored(truth_cif(config, qu.i, qu.s), truth_cif(config, qu.j, qu.t), qu.i == qu.j);
    } else {
      reference = cov_uncensored(truth_cif(config, qu.j, qu.t), truth_cif(config, qu.i, qu.s), qu.i == qu.j);
    }
    const std::string name = "cov_Z" + std::to_string(qu.i) + "(" + std::to_string(qu.s) + ")_Z" +
                             std::to_string(qu.j) + "(" + std::to_string(qu.t) + ")";
    report.checks.push_back(within_se(name, empirical, reference, se, config.tolerance_se));
    truth_rows.push_back(truth_covariance(config, qu.i, qu.j, qu.s, qu.t));
  }
  report.details["censored"] = censored;
  report.details["times"] = times;
  report.details["reference"] = censored ? "mean plug-in estimate" : "closed-form covariance";
  report.details["asymptotic_truth"] = std::move(truth_rows);
  return report;
}

}  // namespace ordcif
