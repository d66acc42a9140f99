#include "ordcif/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordcif/error.hpp"

namespace ordcif {

StepFunction::StepFunction(double initial_value, std::vector<double> knots,
                           std::vector<double> values)
    : initial_(initial_value), knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() != values_.size()) {
    throw Error(Errc::BadStepFunction, "knots and values differ in length (" +
                                           std::to_string(knots_.size()) + " vs " +
                                           std::to_string(values_.size()) + ")");
  }
  for (std::size_t m = 0; m < knots_.size(); ++m) {
    if (!std::isfinite(knots_[m])) throw Error(Errc::BadStepFunction, "non-finite knot");
    if (m > 0 && !(knots_[m - 1] < knots_[m])) {
      throw Error(Errc::BadStepFunction, "knots not strictly increasing");
    }
  }
}

double StepFunction::operator()(double t) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
}

double StepFunction::left_limit(double t) const {
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
}

SupResult step_sup_diff(const StepFunction& f, const StepFunction& g, double upper) {
  SupResult best{f(0.0) - g(0.0), 0.0};
  const StepFunction both[] = {f, g};
  for (double t : union_knots(both)) {
    if (t <= 0.0) continue;
    if (t > upper) break;
    const double d = f(t) - g(t);
    if (d > best.value) best = {d, t};
  }
  return best;
}

double stieltjes_integral(const StepFunction& g, const StepFunction& F, double t) {
  const auto& knots = F.knots();
  const auto& vals = F.values();
  const auto last = static_cast<std::size_t>(
      std::upper_bound(knots.begin(), knots.end(), t) - knots.begin());
  if (last == 0) return 0.0;

  // sum_{m=1}^{M} g_m (F_m - F_{m-1})
  //   = g_M F_M - g_1 F_0 - sum_{m=1}^{M-1} (g_{m+1} - g_m) F_m
  double g_prev = g.left_limit(knots[0]);
  const double head = g_prev * F.initial_value();
  double correction = 0.0;
  for (std::size_t m = 1; m < last; ++m) {
    const double g_m = g.left_limit(knots[m]);
    correction += (g_m - g_prev) * vals[m - 1];
    g_prev = g_m;
  }
  return g_prev * vals[last - 1] - head - correction;
}

StepFunction stieltjes_integral(const StepFunction& g, const StepFunction& F) {
  const auto& knots = F.knots();
  const auto& vals = F.values();
  std::vector<double> out;
  out.reserve(knots.size());
  if (knots.empty()) return StepFunction(0.0);

  double g_prev = g.left_limit(knots[0]);
  const double head = g_prev * F.initial_value();
  double correction = 0.0;
  out.push_back(g_prev * vals[0] - head);
  for (std::size_t m = 1; m < knots.size(); ++m) {
    const double g_m = g.left_limit(knots[m]);
    correction += (g_m - g_prev) * vals[m - 1];
    g_prev = g_m;
    out.push_back(g_m * vals[m] - head - correction);
  }
  return StepFunction(0.0, knots, std::move(out));
}

std::vector<double> union_knots(std::span<const StepFunction> fs) {
  std::vector<double> all;
  for (const auto& f : fs) all.insert(all.end(), f.knots().begin(), f.knots().end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

StepFunction sum(std::span<const StepFunction> fs) {
  return pointwise(fs, [](const Eigen::VectorXd& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  });
}

}  // namespace ordcif
