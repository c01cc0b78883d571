#pragma once

#include <Eigen/Core>
#include <vector>

#include "recombine/measure.hpp"

namespace recombine {
namespace oracle {

struct feasible_support {
  std::vector<Eigen::Index> indices;  // sorted ascending
  Eigen::VectorXd weights;
};

// All supports of size <= max_support carrying simplex weights that place the
// barycenter at the origin, found by exhaustive enumeration and a direct
// bordered-system solve. Guarded to N <= 12, n <= 4 (throws too_large).
// max_support < 0 means n+1. Results ordered by (size, lexicographic indices).
std::vector<feasible_support> enumerate_solutions(const centered_cloud& cloud,
                                                  Eigen::Index max_support = -1);

// True iff some convex combination of at most n+1 atoms hits the origin.
bool contains_zero(const centered_cloud& cloud);

// Convenience: wrap raw points (assumed already centered on the target) in a
// cloud for oracle queries.
centered_cloud cloud_from_points(Eigen::MatrixXd points);

}  // namespace oracle
}  // namespace recombine
