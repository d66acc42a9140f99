#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "ordcif/sample.hpp"

namespace ordcif {

// Constant cause-specific hazards, optional exponential censoring.
struct SimConfig {
  int k = 3;
  std::vector<double> cause_hazards{1.0, 1.0, 1.0};
  double censor_rate = 0.0;
  int n = 500;
  int replicates = 1000;
  std::uint64_t seed = 1;
  std::vector<double> eval_times;  // covariance study grid
  std::vector<int> n_ladder;       // consistency study
  std::optional<double> t;         // dominance / fixed-t time; defaults to the median of T
  std::vector<double> u_grid;      // dominance thresholds
  int cause = 1;                   // dominance / fixed-t cause
  std::vector<std::pair<int, int>> cov_pairs;  // empty: (1,1) and (1,k)
  double tolerance_se = 3.0;       // generic |empirical - theory| <= tolerance_se * SE
  double dominance_se = 2.0;
  double max_kolmogorov = 0.05;
  int reference_draws = 20000;     // Gaussian draws for the fixed-t limit law
  int threads = 1;

  double total_hazard() const;
  double median_time() const;
  double time_or_median() const { return t ? *t : median_time(); }
};

// Errors: BadConfig.
void validate(const SimConfig& config);

SimConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SimConfig& config);

// (lambda_j / lambda) (1 - exp(-lambda t))
double truth_cif(const SimConfig& config, int j, double t);

// Causes whose true CIF coincides with cause i at every t > 0.
std::vector<int> tie_set(const SimConfig& config, int i);

// Asymptotic covariance Cov(Z_i(s), Z_j(t)) of the unrestricted process under the
// simulation truth, by quadrature of the censored-data covariance integrals.
// Either order of s and t is accepted.
double truth_covariance(const SimConfig& config, int i, int j, double s, double t);

// Deterministic in (config.seed, replicate_index). Errors: BadConfig.
Sample simulate_sample(const SimConfig& config, std::uint64_t replicate_index);

// Isotonic projection applied separately within each block of tied true
// CIFs at a fixed time: the max-min functional of the fixed-t limit law.
Eigen::VectorXd tie_block_projection(const SimConfig& config, const Eigen::VectorXd& z);

struct McCheck {
  std::string name;
  double empirical = 0.0;
  double theoretical = 0.0;
  double mc_se = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

enum class Verdict { Pass, Fail, Inconclusive };

struct McReport {
  std::string study;
  int replicates = 0;
  std::vector<McCheck> checks;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  Verdict verdict() const;
};

std::string_view to_string(Verdict v);
nlohmann::ordered_json to_json(const McReport& report);

McReport mc_consistency(const SimConfig& config);
McReport mc_null_distribution(const SimConfig& config);
McReport mc_dominance(const SimConfig& config);
McReport mc_fixed_t_limit(const SimConfig& config);
McReport mc_covariance(const SimConfig& config);

// Empirical P(|Z*_i(t)| <= u) and P(|Z_i(t)| <= u), without the tie-set
// precondition of mc_dominance.
McReport dominance_curves(const SimConfig& config, int cause, double t);

// results[r] = fn(r) for r in [0, count), split across `threads` workers. The
// output does not depend on the number of threads.
template <typename Fn>
auto run_replicates(int count, int threads, Fn&& fn) {
  using Result = decltype(fn(std::uint64_t{0}));
  std::vector<Result> results(static_cast<std::size_t>(count));
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int r = 0; r < count; ++r) results[static_cast<std::size_t>(r)] = fn(static_cast<std::uint64_t>(r));
    return results;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int r = w; r < count; r += workers) {
          results[static_cast<std::size_t>(r)] = fn(static_cast<std::uint64_t>(r));
        }
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace ordcif
