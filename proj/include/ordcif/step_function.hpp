#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace ordcif {

// Right-continuous, piecewise-constant function on the real line.
//
// The function equals initial_value() to the left of the first knot and
// values()[m] on [knots()[m], knots()[m+1]). Left limits are available at
// every point, which is what the product-limit and Stieltjes machinery needs.
class StepFunction {
 public:
  // The zero function.
  StepFunction() = default;

  explicit StepFunction(double initial_value) : initial_(initial_value) {}

  // Throws Error(BadStepFunction) if knots are not strictly increasing and
  // finite or if the two lists differ in length.
  StepFunction(double initial_value, std::vector<double> knots, std::vector<double> values);

  double operator()(double t) const;
  double left_limit(double t) const;

  double initial_value() const noexcept { return initial_; }
  double final_value() const noexcept { return values_.empty() ? initial_ : values_.back(); }
  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return knots_.size(); }

  bool operator==(const StepFunction&) const = default;

 private:
  double initial_ = 0.0;
  std::vector<double> knots_;
  std::vector<double> values_;
};

inline double step_eval(const StepFunction& f, double t) { return f(t); }
inline double step_left_limit(const StepFunction& f, double t) { return f.left_limit(t); }

struct SupResult {
  double value = 0.0;
  double argmax = 0.0;
};

// Exact supremum of f - g over [0, upper]. Both functions are constant between
// consecutive points of the union knot set, so scanning t = 0 and every knot of
// f or g inside (0, upper] is exhaustive. Ties resolve to the earliest time.
SupResult step_sup_diff(const StepFunction& f, const StepFunction& g, double upper);

// Sum of g(u-) * (F(u) - F(u-)) over the knots u <= t of F.
//
// The sum is evaluated in Abel (summation by parts) form, so a constant
// integrand g == 1 returns F(t) - F(0) without accumulating rounding error.
double stieltjes_integral(const StepFunction& g, const StepFunction& F, double t);

// t -> stieltjes_integral(g, F, t), materialized on the knots of F.
StepFunction stieltjes_integral(const StepFunction& g, const StepFunction& F);

// Sorted union of the knot sets.
std::vector<double> union_knots(std::span<const StepFunction> fs);

// Applies `op` to the vector (f_1(t), ..., f_m(t)) at every point of the union
// knot set (and to the initial values) and returns the resulting step function.
template <typename Op>
StepFunction pointwise(std::span<const StepFunction> fs, Op&& op) {
  const auto m = static_cast<Eigen::Index>(fs.size());
  Eigen::VectorXd x(m);
  for (Eigen::Index i = 0; i < m; ++i) x[i] = fs[static_cast<std::size_t>(i)].initial_value();
  const double initial = op(x);

  std::vector<double> knots = union_knots(fs);
  std::vector<double> values;
  values.reserve(knots.size());
  for (double t : knots) {
    for (Eigen::Index i = 0; i < m; ++i) x[i] = fs[static_cast<std::size_t>(i)](t);
    values.push_back(op(x));
  }
  return StepFunction(initial, std::move(knots), std::move(values));
}

// Pointwise sum f_1 + ... + f_m, accumulated in index order.
StepFunction sum(std::span<const StepFunction> fs);

}  // namespace ordcif
