#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <span>
#include <vector>

#include "recombine/errors.hpp"
#include "recombine/measure.hpp"

namespace recombine {

// Membership tolerance for the cone sign tests. Absolute: clouds are
// unit-normalized by default, and boundary points are legitimate solutions.
inline constexpr double k_cone_eps = 1e-10;

// A cone basis over a fixed cloud: n selected atoms, the inverse A of the
// matrix whose columns are those atoms, and the cached projection table
// A * points^T. A point x lies in the negative cone of the basis exactly
// when every coordinate of A*x is nonpositive, so membership tests reduce
// to sign scans of cached columns.
//
// Owned by a single reduction task; several bases over the same immutable
// cloud may be used concurrently.
class cone_basis {
 public:
  static constexpr double k_pivot_ratio_min = 1e-12;

  // rebuild_every: full re-inversions happen after that many rank-1 swaps.
  // 0 selects the default (one per n swaps); negative disables them.
  cone_basis(const centered_cloud& cloud, int rebuild_every = 0);
  cone_basis(const centered_cloud& cloud, std::span<const Eigen::Index> indices,
             int rebuild_every = 0);

  // Install a new basis by direct inversion. The non-throwing form returns
  // false when the basis matrix is singular (pivot ratio below tolerance).
  bool try_reset(std::span<const Eigen::Index> indices);
  void reset(std::span<const Eigen::Index> indices);  // throws singular_basis

  const Eigen::MatrixXd& inverse() const { return inverse_; }
  const Eigen::MatrixXd& projections() const { return projections_; }
  const std::vector<Eigen::Index>& indices() const { return indices_; }
  const centered_cloud& cloud() const { return *cloud_; }
  int swap_count() const { return swap_count_; }
  long long inversion_attempts() const { return inversion_attempts_; }
  long long successful_builds() const { return successful_builds_; }
  long long total_swaps() const { return total_swaps_; }

  // All active atoms inside the negative cone (every projection coordinate
  // <= eps; boundary included).
  std::vector<Eigen::Index> negative_cone_hits(std::span<const Eigen::Index> active) const;

  // All active atoms strictly inside the cone (every coordinate > eps).
  std::vector<Eigen::Index> interior_cone_hits(std::span<const Eigen::Index> active) const;

  bool in_negative_cone(Eigen::Index j) const;
  bool in_cone_interior(Eigen::Index j) const;

  // Scan for negative-cone hits and pick the one whose smallest projection
  // coordinate is most negative (ties to the lowest index). Returns -1 when
  // there is no hit.
  Eigen::Index deepest_negative_hit(std::span<const Eigen::Index> active) const;

  enum class swap_status { ok, degenerate, rebuild_failed };

  // Replace the atom in `slot` by `new_index` through the rank-1 update
  //   A' = A - A(x_new - x_old) e_slot^T A / (1 + e_slot^T A (x_new - x_old))
  // and the matching projection-table update. A no-op when new_index already
  // occupies the slot. The non-throwing form reports failure instead.
  swap_status try_swap(int slot, Eigen::Index new_index);
  void swap_vector(int slot, Eigen::Index new_index);  // throws degenerate_swap / singular_basis

  void rebuild();  // throws singular_basis

  // Simplex weights over [basis atoms..., star]: with p the cached projection
  // column of the star and c = 1 - sum(p), returns (-p/c, 1/c). Requires the
  // star to lie in the negative cone (else not_in_negative_cone).
  Eigen::VectorXd solve_weights(Eigen::Index star_index) const;

 private:
  bool invert_current();  // shared by try_reset / rebuild

  const centered_cloud* cloud_;
  std::vector<Eigen::Index> indices_;
  Eigen::MatrixXd inverse_;      // n x n
  Eigen::MatrixXd projections_;  // n x N
  Eigen::MatrixXd basis_mat_;    // n x n scratch for inversions
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd update_dir_;   // n scratch
  Eigen::RowVectorXd inv_row_;   // n scratch
  Eigen::RowVectorXd proj_row_;  // N scratch
  int rebuild_every_;
  int swap_count_ = 0;
  long long inversion_attempts_ = 0;
  long long successful_builds_ = 0;
  long long total_swaps_ = 0;
};

}  // namespace recombine
