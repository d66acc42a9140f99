#include "ordcif/estimators.hpp"

#include <string>

#include "ordcif/error.hpp"

namespace ordcif {
namespace {

void check_cause(const Sample& sample, int j) {
  if (j < 1 || j > sample.k()) {
    throw Error(Errc::BadCauseIndex,
                "cause " + std::to_string(j) + " outside 1.." + std::to_string(sample.k()));
  }
}

}  // namespace

RiskTable risk_table(const Sample& sample) {
  const auto& obs = sample.observations();
  RiskTable table;
  table.n = static_cast<int>(obs.size());
  for (const auto& o : obs) {
    if (table.times.empty() || table.times.back() != o.time) table.times.push_back(o.time);
  }
  const auto m_count = static_cast<Eigen::Index>(table.times.size());
  table.at_risk.resize(m_count);
  table.counts = Eigen::MatrixXd::Zero(m_count, sample.k() + 1);

  Eigen::Index m = -1;
  double prev = 0.0;
  std::size_t seen = 0;
  for (const auto& o : obs) {
    if (m < 0 || o.time != prev) {
      ++m;
      prev = o.time;
      table.at_risk[m] = static_cast<double>(obs.size() - seen);
    }
    table.counts(m, o.cause.code) += 1.0;
    ++seen;
  }
  return table;
}

StepFunction ecdf_cif(const Sample& sample, int j) {
  check_cause(sample, j);
  if (sample.has_censoring()) {
    throw Error(Errc::CensoringPresent, "empirical CIF requires uncensored data");
  }
  const double n = static_cast<double>(sample.size());
  std::vector<double> knots;
  std::vector<double> values;
  std::size_t cumulative = 0;
  for (const auto& o : sample.observations()) {
    if (o.cause.code != j) continue;
    ++cumulative;
    const double v = static_cast<double>(cumulative) / n;
    if (!knots.empty() && knots.back() == o.time) {
      values.back() = v;
    } else {
      knots.push_back(o.time);
      values.push_back(v);
    }
  }
  return StepFunction(0.0, std::move(knots), std::move(values));
}

SurvivalCurve kaplan_meier(const Sample& sample) {
  const RiskTable table = risk_table(sample);
  std::vector<double> s_knots, s_values, c_knots, c_values;
  double s = 1.0;
  double sc = 1.0;
  for (Eigen::Index m = 0; m < static_cast<Eigen::Index>(table.times.size()); ++m) {
    const double y = table.at_risk[m];
    const double d = table.events(m);
    const double c = table.counts(m, 0);
    if (d > 0.0) {
      s *= (y - d) / y;
      s_knots.push_back(table.times[static_cast<std::size_t>(m)]);
      s_values.push_back(s);
    }
    if (c > 0.0) {
      // events at a tied time leave the risk set before the censorings do
      const double yc = y - d;
      sc *= (yc - c) / yc;
      c_knots.push_back(table.times[static_cast<std::size_t>(m)]);
      c_values.push_back(sc);
    }
  }
  return {StepFunction(1.0, std::move(s_knots), std::move(s_values)),
          StepFunction(1.0, std::move(c_knots), std::move(c_values))};
}

StepFunction censoring_km(const Sample& sample) { return kaplan_meier(sample).censoring_survival; }

namespace {

CumHazard nelson_aalen_impl(const Sample& sample, int j) {
  const RiskTable table = risk_table(sample);
  std::vector<double> knots, values;
  double h = 0.0;
  for (Eigen::Index m = 0; m < static_cast<Eigen::Index>(table.times.size()); ++m) {
    const double d = j == 0 ? table.events(m) : table.counts(m, j);
    if (d <= 0.0) continue;
    h += d / table.at_risk[m];
    knots.push_back(table.times[static_cast<std::size_t>(m)]);
    values.push_back(h);
  }
  return {StepFunction(0.0, std::move(knots), std::move(values))};
}

}  // namespace

CumHazard nelson_aalen(const Sample& sample, int j) {
  check_cause(sample, j);
  return nelson_aalen_impl(sample, j);
}

CumHazard nelson_aalen(const Sample& sample) { return nelson_aalen_impl(sample, 0); }

StepFunction censored_cif(const Sample& sample, int j) {
  check_cause(sample, j);
  const StepFunction s = kaplan_meier(sample).survival;
  return stieltjes_integral(s, nelson_aalen_impl(sample, j).hazard);
}

CifSet estimate_cifs(const Sample& sample) {
  std::vector<StepFunction> cifs;
  cifs.reserve(static_cast<std::size_t>(sample.k()));
  if (!sample.has_censoring()) {
    for (int j = 1; j <= sample.k(); ++j) cifs.push_back(ecdf_cif(sample, j));
  } else {
    const StepFunction s = kaplan_meier(sample).survival;
    for (int j = 1; j <= sample.k(); ++j) {
      cifs.push_back(stieltjes_integral(s, nelson_aalen_impl(sample, j).hazard));
    }
  }
  return make_cif_set(std::move(cifs), false);
}

}  // namespace ordcif
