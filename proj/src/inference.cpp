#include "ordcif/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordcif/error.hpp"
#include "ordcif/normal.hpp"

namespace ordcif {

double cov_uncensored(double fi_s, double fj_t, bool same_cause) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(fi_s) || !in_unit(fj_t)) {
    throw Error(Errc::OutOfRange, "CIF values must lie in [0, 1]");
  }
  return fi_s * ((same_cause ? 1.0 : 0.0) - fj_t);
}

PluginFit fit_plugin(const Sample& sample) {
  return {static_cast<int>(sample.size()), estimate_cifs(sample), risk_table(sample)};
}

double cov_censored_plugin(const PluginFit& fit, const CovQuery& q) {
  const int k = fit.cifs.k;
  if (q.i < 1 || q.i > k || q.j < 1 || q.j > k) {
    throw Error(Errc::BadQuery, "cause index outside 1.." + std::to_string(k));
  }
  if (!(std::isfinite(q.s) && std::isfinite(q.t) && q.s >= 0.0 && q.s <= q.t)) {
    throw Error(Errc::BadQuery, "require 0 <= s <= t");
  }
  const int i = q.i - 1;
  const int j = q.j - 1;
  const Eigen::VectorXd at_s = fit.cifs.at(q.s);
  const Eigen::VectorXd at_t = fit.cifs.at(q.t);
  const double fi_s = at_s[i];
  const double fi_t = at_t[i];
  const double fj_t = at_t[j];

  const RiskTable& table = fit.table;
  const double n = static_cast<double>(fit.n);
  Eigen::VectorXd f_minus(k);
  double acc = 0.0;
  for (Eigen::Index m = 0; m < static_cast<Eigen::Index>(table.times.size()); ++m) {
    const double u = table.times[static_cast<std::size_t>(m)];
    if (u > q.s) break;
    if (table.events(m) <= 0.0) continue;
    const double y = table.at_risk[m];
    if (y <= 0.0) throw Error(Errc::EmptyRiskSet, "empty risk set at an event time");
    for (int l = 0; l < k; ++l) f_minus[l] = fit.cifs.cifs[static_cast<std::size_t>(l)].left_limit(u);
    const double total_minus = f_minus.sum();
    // dLambda_l(u) / pi(u) = (d_l / Y) / (Y / n)
    auto weight = [&](int l) { return table.counts(m, l + 1) * n / (y * y); };

    const double a_i_s = 1.0 - fi_s - (total_minus - f_minus[i]);
    if (i == j) {
      const double a_i_t = 1.0 - fi_t - (total_minus - f_minus[i]);
      acc += a_i_s * a_i_t * weight(i);
      for (int l = 0; l < k; ++l) {
        if (l == i) continue;
        acc += (f_minus[i] - fi_s) * (f_minus[i] - fi_t) * weight(l);
      }
    } else {
      const double a_j_t = 1.0 - fj_t - (total_minus - f_minus[j]);
      acc += a_i_s * (f_minus[j] - fj_t) * weight(i);
      acc += a_j_t * (f_minus[i] - fi_s) * weight(j);
      for (int l = 0; l < k; ++l) {
        if (l == i || l == j) continue;
        acc += (fi_s - f_minus[i]) * (fj_t - f_minus[j]) * weight(l);
      }
    }
  }
  return acc;
}

double cov_censored_plugin(const Sample& sample, const CovQuery& query) {
  return cov_censored_plugin(fit_plugin(sample), query);
}

StepFunction Band::lower_fn(int cause) const {
  const Eigen::VectorXd row = lower.row(cause - 1).transpose();
  return StepFunction(0.0, times, std::vector<double>(row.begin(), row.end()));
}

StepFunction Band::upper_fn(int cause) const {
  const Eigen::VectorXd row = upper.row(cause - 1).transpose();
  return StepFunction(0.0, times, std::vector<double>(row.begin(), row.end()));
}

Band pointwise_ci(const CifSet& restricted, const Sample& sample, double level,
                  std::span<const double> times) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(Errc::BadLevel, "confidence level must lie in (0, 1), got " + std::to_string(level));
  }
  if (!restricted.restricted) throw Error(Errc::NotRestricted, "expected restricted estimates");

  Band band;
  band.level = level;
  band.times.assign(times.begin(), times.end());
  std::sort(band.times.begin(), band.times.end());
  band.times.erase(std::unique(band.times.begin(), band.times.end()), band.times.end());

  const int k = restricted.k;
  const auto m_count = static_cast<Eigen::Index>(band.times.size());
  band.lower.resize(k, m_count);
  band.upper.resize(k, m_count);

  const double z = std_normal_quantile(0.5 * (1.0 + level));
  const double n = static_cast<double>(sample.size());
  const PluginFit fit = fit_plugin(sample);
  const bool censored = sample.has_censoring();

  for (Eigen::Index m = 0; m < m_count; ++m) {
    const double t = band.times[static_cast<std::size_t>(m)];
    const Eigen::VectorXd centre = restricted.at(t);
    const Eigen::VectorXd raw = fit.cifs.at(t);
    for (int i = 0; i < k; ++i) {
      const double v = censored ? cov_censored_plugin(fit, {i + 1, i + 1, t, t})
                                : cov_uncensored(raw[i], raw[i], true);
      const double half = z * std::sqrt(std::max(v, 0.0) / n);
      band.lower(i, m) = std::clamp(centre[i] - half, 0.0, 1.0);
      band.upper(i, m) = std::clamp(centre[i] + half, 0.0, 1.0);
    }
  }
  return band;
}

Band tighten_bands(const Band& band) {
  Band out = band;
  const Eigen::Index k = band.lower.rows();
  for (Eigen::Index i = 1; i < k; ++i) {
    out.lower.row(i) = out.lower.row(i).cwiseMax(out.lower.row(i - 1));
  }
  for (Eigen::Index i = k - 2; i >= 0; --i) {
    out.upper.row(i) = out.upper.row(i).cwiseMin(out.upper.row(i + 1));
  }
  return out;
}

}  // namespace ordcif
