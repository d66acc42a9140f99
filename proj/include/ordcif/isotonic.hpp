#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Core>

#include "ordcif/cif_set.hpp"
#include "ordcif/error.hpp"

namespace ordcif {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Equal-weights least-squares projection of `values` onto the cone
// {x : x_1 <= x_2 <= ... <= x_k}, by pool-adjacent-violators.
//
// Adjacent entries that compare equal are left alone; only strict violations
// are pooled, so the projection is the identity on the closed cone.
template <typename Derived>
Vector<typename Derived::Scalar> isotonic_project(const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = values.size();
  if (k == 0) throw Error(Errc::EmptyVector, "cannot project an empty vector");

  struct Block {
    Scalar sum;
    Eigen::Index count;
    Scalar mean;
  };
  std::vector<Block> blocks;
  blocks.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    blocks.push_back({values[i], 1, values[i]});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      prev.sum += top.sum;
      prev.count += top.count;
      prev.mean = prev.sum / static_cast<Scalar>(prev.count);
    }
  }

  Vector<Scalar> out(k);
  Eigen::Index pos = 0;
  for (const Block& b : blocks) {
    out.segment(pos, b.count).setConstant(b.mean);
    pos += b.count;
  }
  return out;
}

// The max-min representation max_{r<=i} min_{s>=i} Av(x; r, s), evaluated
// literally in O(k^3) time. Used to cross-check isotonic_project.
template <typename Derived>
Vector<typename Derived::Scalar> maxmin_reference(const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = values.size();
  if (k == 0) throw Error(Errc::EmptyVector, "cannot project an empty vector");

  auto average = [&](Eigen::Index r, Eigen::Index s) {
    Scalar acc = 0;
    for (Eigen::Index j = r; j <= s; ++j) acc += values[j];
    return acc / static_cast<Scalar>(s - r + 1);
  };

  Vector<Scalar> out(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    Scalar best_lower{};
    for (Eigen::Index r = 0; r <= i; ++r) {
      Scalar inner = average(r, i);
      for (Eigen::Index s = i + 1; s < k; ++s) inner = std::min(inner, average(r, s));
      best_lower = r == 0 ? inner : std::max(best_lower, inner);
    }
    out[i] = best_lower;
  }
  return out;
}

// Pointwise isotonic projection of an unrestricted CifSet over the union of
// its knots. Errors: AlreadyRestricted.
CifSet restrict_cifs(const CifSet& unrestricted);

}  // namespace ordcif
