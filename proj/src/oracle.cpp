#include "recombine/oracle.hpp"

#include <Eigen/QR>

namespace recombine {
namespace oracle {

namespace {

constexpr Eigen::Index k_max_atoms = 12;
constexpr Eigen::Index k_max_dim = 4;
constexpr double k_weight_tol = 1e-10;  // mirrors the cone membership tolerance
constexpr double k_residual_tol = 1e-9;

// Advance a k-combination of {0..bound-1} in lexicographic order.
bool next_combination(std::vector<Eigen::Index>& comb, Eigen::Index bound) {
  const auto k = static_cast<Eigen::Index>(comb.size());
  for (Eigen::Index i = k - 1; i >= 0; --i) {
    if (comb[static_cast<std::size_t>(i)] < bound - (k - i)) {
      ++comb[static_cast<std::size_t>(i)];
      for (Eigen::Index j = i + 1; j < k; ++j)
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<feasible_support> enumerate_solutions(const centered_cloud& cloud,
                                                  Eigen::Index max_support) {
  const Eigen::Index atoms = cloud.size();
  const Eigen::Index n = cloud.dim();
  if (atoms > k_max_atoms || n > k_max_dim)
    throw too_large("oracle enumeration is limited to N <= 12, n <= 4");
  if (max_support < 0) max_support = n + 1;
  max_support = std::min(max_support, atoms);

  std::vector<feasible_support> found;
  Eigen::MatrixXd system(n + 1, max_support);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = 1.0;

  for (Eigen::Index k = 1; k <= max_support; ++k) {
    std::vector<Eigen::Index> comb(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
    do {
      auto block = system.leftCols(k);
      for (Eigen::Index c = 0; c < k; ++c) {
        block.col(c).head(n) = cloud.points.row(comb[static_cast<std::size_t>(c)]).transpose();
        block(n, c) = 1.0;
      }
      Eigen::VectorXd w = block.colPivHouseholderQr().solve(rhs.head(n + 1));
      const double residual = (block * w - rhs).norm();
      if (residual <= k_residual_tol && w.minCoeff() >= -k_weight_tol) {
        found.push_back({comb, std::move(w)});
      }
    } while (next_combination(comb, atoms));
  }
  return found;
}

bool contains_zero(const centered_cloud& cloud) {
  return !enumerate_solutions(cloud).empty();
}

centered_cloud cloud_from_points(Eigen::MatrixXd points) {
  centered_cloud cloud;
  const Eigen::Index atoms = points.rows();
  cloud.points = std::move(points);
  cloud.kappas = Eigen::VectorXd::Ones(atoms);
  cloud.barycenter = Eigen::VectorXd::Zero(cloud.points.cols());
  cloud.source_weights = Eigen::VectorXd::Constant(atoms, 1.0 / static_cast<double>(atoms));
  return cloud;
}

}  // namespace oracle
}  // namespace recombine
