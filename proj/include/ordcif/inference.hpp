#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ordcif/cif_set.hpp"
#include "ordcif/estimators.hpp"
#include "ordcif/sample.hpp"

namespace ordcif {

// Asymptotic covariance of sqrt(n)(F_i(s) - F_i(s)^) and sqrt(n)(F_j(t) - F_j(t)^)
// for uncensored data, s <= t: F_i(s) (1{i=j} - F_j(t)). Errors: OutOfRange.
double cov_uncensored(double fi_s, double fj_t, bool same_cause);

struct CovQuery {
  int i = 1;
  int j = 1;
  double s = 0.0;
  double t = 0.0;
};

// Everything the censored covariance plug-in needs, computed once per sample.
struct PluginFit {
  int n = 0;
  CifSet cifs;  // unrestricted
  RiskTable table;
};

PluginFit fit_plugin(const Sample& sample);

// Plug-in estimate of the censored-data covariance Cov(Z_i(s), Z_j(t)).
// Integrals against dLambda_l / pi become jump sums over event times u <= s,
// with pi(u) = Y(u)/n and F_l evaluated at u-. Errors: BadQuery, EmptyRiskSet.
double cov_censored_plugin(const PluginFit& fit, const CovQuery& query);
double cov_censored_plugin(const Sample& sample, const CovQuery& query);

// Per-cause lower/upper limits on a time grid; row i - 1 belongs to cause i.
struct Band {
  std::vector<double> times;
  Eigen::MatrixXd lower;
  Eigen::MatrixXd upper;
  double level = 0.95;

  int k() const { return static_cast<int>(lower.rows()); }
  StepFunction lower_fn(int cause) const;
  StepFunction upper_fn(int cause) const;
};

// Normal-approximation intervals centred at the restricted estimates with the
// unrestricted plug-in variance, clipped to [0, 1]. Errors: BadLevel, NotRestricted.
Band pointwise_ci(const CifSet& restricted, const Sample& sample, double level,
                  std::span<const double> times);

// L_i* = max_{j<=i} L_j and U_i* = min_{j>=i} U_j at every grid time.
Band tighten_bands(const Band& band);

}  // namespace ordcif
