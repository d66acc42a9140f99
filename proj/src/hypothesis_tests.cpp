#include "ordcif/hypothesis_tests.hpp"

#include <cmath>
#include <string>

#include "ordcif/error.hpp"
#include "ordcif/estimators.hpp"

namespace ordcif {

double asymptotic_pvalue(double t, int k) {
  if (k < 2) throw Error(Errc::BadK, "k must be at least 2, got " + std::to_string(k));
  if (!(t > 0.0)) return 1.0;
  // 2 Phi(t) - 1 = 1 - 2 Q(t); 1 - (1 - 2Q)^(k-1) = -expm1((k-1) log1p(-2Q))
  const double q = std_normal_sf(t);
  return -std::expm1(static_cast<double>(k - 1) * std::log1p(-2.0 * q));
}

double subtest_weight(int k, int j) {
  return static_cast<double>(k) * static_cast<double>(j - 1) / static_cast<double>(j);
}

namespace {

SubtestResult subtest_from(const std::vector<StepFunction>& cifs, int k, int j, double n,
                           double upper) {
  const auto lower_count = static_cast<std::size_t>(j - 1);
  const StepFunction average = pointwise(
      std::span<const StepFunction>(cifs.data(), lower_count),
      [j](const Eigen::VectorXd& x) {
        double s = 0.0;
        for (double v : x) s += v;
        return s / static_cast<double>(j - 1);
      });
  const SupResult sup = step_sup_diff(cifs[static_cast<std::size_t>(j - 1)], average, upper);
  return {j, std::sqrt(n) * std::sqrt(subtest_weight(k, j)) * sup.value, sup.argmax};
}

std::vector<StepFunction> weighted_cifs(const Sample& sample, bool censored) {
  std::vector<StepFunction> cifs = estimate_cifs(sample).cifs;
  if (!censored) return cifs;
  const StepFunction sc = censoring_km(sample);
  const StepFunction root(std::sqrt(sc.initial_value()), sc.knots(), [&] {
    std::vector<double> v = sc.values();
    for (double& x : v) x = std::sqrt(x);
    return v;
  }());
  for (auto& f : cifs) f = stieltjes_integral(root, f);
  return cifs;
}

void check_j(const Sample& sample, int j) {
  if (j < 2 || j > sample.k()) {
    throw Error(Errc::BadJ, "j = " + std::to_string(j) + " outside 2.." + std::to_string(sample.k()));
  }
}

}  // namespace

SubtestResult subtest_statistic(const Sample& sample, int j, bool censored) {
  check_j(sample, j);
  const auto cifs = weighted_cifs(sample, censored);
  return subtest_from(cifs, sample.k(), j, static_cast<double>(sample.size()), sample.tau());
}

TestReport ordered_test(const Sample& sample) {
  TestReport report;
  report.k = sample.k();
  report.censored = sample.has_censoring();
  const auto cifs = weighted_cifs(sample, report.censored);
  const double n = static_cast<double>(sample.size());
  bool first = true;
  for (int j = 2; j <= sample.k(); ++j) {
    const SubtestResult r = subtest_from(cifs, sample.k(), j, n, sample.tau());
    report.subtests.push_back(r);
    if (first || r.statistic > report.statistic ||
        (r.statistic == report.statistic && r.argmax < report.argmax)) {
      report.statistic = r.statistic;
      report.argmax = r.argmax;
      report.argmax_j = r.j;
      first = false;
    }
  }
  report.p_value = asymptotic_pvalue(report.statistic, sample.k());
  return report;
}

}  // namespace ordcif
