#pragma once

#include <vector>

#include <Eigen/Core>

#include "ordcif/step_function.hpp"

namespace ordcif {

// k cumulative incidence functions together with their pointwise sum.
struct CifSet {
  int k = 0;
  std::vector<StepFunction> cifs;  // cifs[j - 1] is the CIF of cause j
  StepFunction total;
  bool restricted = false;

  const StepFunction& cif(int cause) const { return cifs.at(static_cast<std::size_t>(cause - 1)); }

  // (F_1(t), ..., F_k(t))
  Eigen::VectorXd at(double t) const {
    Eigen::VectorXd v(k);
    for (int j = 0; j < k; ++j) v[j] = cifs[static_cast<std::size_t>(j)](t);
    return v;
  }
};

// Builds a CifSet whose total is the pointwise sum of `cifs` accumulated in
// cause order, so the sum identity holds bit-for-bit at every knot.
inline CifSet make_cif_set(std::vector<StepFunction> cifs, bool restricted) {
  CifSet out;
  out.k = static_cast<int>(cifs.size());
  out.total = sum(cifs);
  out.cifs = std::move(cifs);
  out.restricted = restricted;
  return out;
}

}  // namespace ordcif
