#pragma once

#include <Eigen/Core>
#include <functional>

#include "recombine/measure.hpp"
#include "recombine/solution.hpp"

namespace recombine {

// Row subset and scalings that reproduce the normal-equations matrix
// (X|Y)^T (X|Y) exactly: scaled rows s_i * (x_i | y_i) with s_i = sqrt(N w_i).
struct lsq_coreset {
  std::vector<Eigen::Index> row_indices;
  Eigen::VectorXd row_scales;
};

Eigen::Index moment_feature_dim(Eigen::Index d);  // (d+1)(d+2)/2

// Distinct pairwise products z_a * z_b, a <= b, in lexicographic order.
Eigen::VectorXd moment_features(const Eigen::VectorXd& z);

using coreset_reducer = std::function<recombination_solution(const discrete_measure&)>;

// Reduce the uniform measure on the moment-feature rows of (X|Y); rows with
// N <= feature_dim + 1 pass through with unit scales.
lsq_coreset build_coreset(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const coreset_reducer& reducer);

// Least-squares minimizer over the scaled coreset rows; identical to the
// full-data minimizer because their objectives agree as functions of w.
// Throws rank_deficient when the coreset design matrix loses column rank.
Eigen::VectorXd solve_reduced(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              const lsq_coreset& coreset);

}  // namespace recombine
