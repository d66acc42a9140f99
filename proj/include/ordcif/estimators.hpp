#pragma once

#include <vector>

#include <Eigen/Core>

#include "ordcif/cif_set.hpp"
#include "ordcif/sample.hpp"
#include "ordcif/step_function.hpp"

namespace ordcif {

// Counting-process summary of a sample at its distinct observed times.
struct RiskTable {
  std::vector<double> times;  // distinct observed times, ascending
  Eigen::VectorXd at_risk;    // Y(u) = #{L_i >= u}
  Eigen::MatrixXd counts;     // counts(m, c): observations at times[m] with cause code c (0..k)
  int n = 0;

  double events(Eigen::Index m) const { return counts.row(m).tail(counts.cols() - 1).sum(); }
};

RiskTable risk_table(const Sample& sample);

struct SurvivalCurve {
  StepFunction survival;            // Kaplan-Meier of the lifetime T
  StepFunction censoring_survival;  // Kaplan-Meier of the censoring time C
};

struct CumHazard {
  StepFunction hazard;
};

// Empirical sub-distribution function (1/n) #{T_i <= t, cause j}.
// Errors: CensoringPresent, BadCauseIndex.
StepFunction ecdf_cif(const Sample& sample, int j);

SurvivalCurve kaplan_meier(const Sample& sample);
StepFunction censoring_km(const Sample& sample);

// Nelson-Aalen estimator of the cause-j cumulative hazard. Errors: BadCauseIndex.
CumHazard nelson_aalen(const Sample& sample, int j);

// All-cause Nelson-Aalen estimator.
CumHazard nelson_aalen(const Sample& sample);

// Integral of the left-continuous Kaplan-Meier curve against the cause-j
// Nelson-Aalen estimator. Errors: BadCauseIndex.
StepFunction censored_cif(const Sample& sample, int j);

// Unrestricted CIFs: empirical when no record is censored, product-limit
// plug-in for every cause otherwise.
CifSet estimate_cifs(const Sample& sample);

}  // namespace ordcif
