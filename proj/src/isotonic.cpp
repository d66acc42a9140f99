#include "ordcif/isotonic.hpp"

namespace ordcif {

CifSet restrict_cifs(const CifSet& unrestricted) {
  if (unrestricted.restricted) {
    throw Error(Errc::AlreadyRestricted, "input CifSet is already restricted");
  }
  const int k = unrestricted.k;
  const std::vector<double> grid = union_knots(unrestricted.cifs);

  const Eigen::VectorXd initial = isotonic_project(unrestricted.at(0.0));
  Eigen::MatrixXd projected(k, static_cast<Eigen::Index>(grid.size()));
  for (std::size_t m = 0; m < grid.size(); ++m) {
    projected.col(static_cast<Eigen::Index>(m)) = isotonic_project(unrestricted.at(grid[m]));
  }

  CifSet out;
  out.k = k;
  out.total = unrestricted.total;
  out.restricted = true;
  out.cifs.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const Eigen::VectorXd row = projected.row(j).transpose();
    out.cifs.emplace_back(initial[j], grid, std::vector<double>(row.begin(), row.end()));
  }
  return out;
}

}  // namespace ordcif
