#include "recombine/cone.hpp"

#include <cmath>
#include <limits>

namespace recombine {

cone_basis::cone_basis(const centered_cloud& cloud, int rebuild_every)
    : cloud_(&cloud), rebuild_every_(rebuild_every == 0 ? static_cast<int>(cloud.dim()) : rebuild_every) {
  const Eigen::Index n = cloud.dim();
  indices_.assign(static_cast<std::size_t>(n), -1);
  inverse_.resize(n, n);
  projections_.resize(n, cloud.size());
  basis_mat_.resize(n, n);
  update_dir_.resize(n);
  inv_row_.resize(n);
  proj_row_.resize(cloud.size());
}

cone_basis::cone_basis(const centered_cloud& cloud, std::span<const Eigen::Index> indices,
                       int rebuild_every)
    : cone_basis(cloud, rebuild_every) {
  reset(indices);
}

bool cone_basis::invert_current() {
  ++inversion_attempts_;
  const Eigen::Index n = cloud_->dim();
  for (Eigen::Index c = 0; c < n; ++c)
    basis_mat_.col(c) = cloud_->points.row(indices_[static_cast<std::size_t>(c)]).transpose();
  lu_.compute(basis_mat_);
  const Eigen::VectorXd pivots = lu_.matrixLU().diagonal().cwiseAbs();
  const double largest = pivots.maxCoeff();
  const double smallest = pivots.minCoeff();
  if (!(largest > 0.0) || smallest < k_pivot_ratio_min * largest) return false;
  inverse_ = lu_.inverse();
  projections_.noalias() = inverse_ * cloud_->points.transpose();
  swap_count_ = 0;
  ++successful_builds_;
  return true;
}

bool cone_basis::try_reset(std::span<const Eigen::Index> indices) {
  const Eigen::Index n = cloud_->dim();
  if (static_cast<Eigen::Index>(indices.size()) != n)
    throw index_out_of_range("basis needs exactly n indices");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= cloud_->size())
      throw index_out_of_range("basis index out of range");
    for (std::size_t j = i + 1; j < indices.size(); ++j)
      if (indices[i] == indices[j]) throw index_out_of_range("basis indices must be distinct");
  }
  std::vector<Eigen::Index> backup = indices_;
  indices_.assign(indices.begin(), indices.end());
  if (invert_current()) return true;
  indices_ = std::move(backup);
  return false;
}

void cone_basis::reset(std::span<const Eigen::Index> indices) {
  if (!try_reset(indices)) throw singular_basis("basis matrix is numerically singular");
}

void cone_basis::rebuild() {
  if (!invert_current()) throw singular_basis("rebuild hit a singular basis");
}

bool cone_basis::in_negative_cone(Eigen::Index j) const {
  const Eigen::Index n = projections_.rows();
  const double* col = projections_.data() + j * n;
  for (Eigen::Index r = 0; r < n; ++r)
    if (col[r] > k_cone_eps) return false;
  return true;
}

bool cone_basis::in_cone_interior(Eigen::Index j) const {
  const Eigen::Index n = projections_.rows();
  const double* col = projections_.data() + j * n;
  for (Eigen::Index r = 0; r < n; ++r)
    if (col[r] <= k_cone_eps) return false;
  return true;
}

std::vector<Eigen::Index> cone_basis::negative_cone_hits(
    std::span<const Eigen::Index> active) const {
  std::vector<Eigen::Index> hits;
  for (const Eigen::Index j : active)
    if (in_negative_cone(j)) hits.push_back(j);
  return hits;
}

std::vector<Eigen::Index> cone_basis::interior_cone_hits(
    std::span<const Eigen::Index> active) const {
  std::vector<Eigen::Index> hits;
  for (const Eigen::Index j : active)
    if (in_cone_interior(j)) hits.push_back(j);
  return hits;
}

Eigen::Index cone_basis::deepest_negative_hit(std::span<const Eigen::Index> active) const {
  const Eigen::Index n = projections_.rows();
  Eigen::Index best = -1;
  double best_depth = std::numeric_limits<double>::infinity();
  for (const Eigen::Index j : active) {
    const double* col = projections_.data() + j * n;
    double lo = std::numeric_limits<double>::infinity();
    bool hit = true;
    for (Eigen::Index r = 0; r < n; ++r) {
      const double v = col[r];
      if (v > k_cone_eps) {
        hit = false;
        break;
      }
      if (v < lo) lo = v;
    }
    if (hit && lo < best_depth) {
      best_depth = lo;
      best = j;
    }
  }
  return best;
}

cone_basis::swap_status cone_basis::try_swap(int slot, Eigen::Index new_index) {
  const Eigen::Index n = cloud_->dim();
  if (slot < 0 || slot >= n) throw index_out_of_range("swap slot out of range");
  if (new_index < 0 || new_index >= cloud_->size())
    throw index_out_of_range("swap index out of range");
  const Eigen::Index old_index = indices_[static_cast<std::size_t>(slot)];
  if (new_index == old_index) return swap_status::ok;

  update_dir_.noalias() =
      inverse_ * (cloud_->points.row(new_index) - cloud_->points.row(old_index)).transpose();
  const double denom = 1.0 + update_dir_[slot];
  if (std::abs(denom) < 1e-12) return swap_status::degenerate;

  update_dir_ /= denom;
  inv_row_ = inverse_.row(slot);
  inverse_.noalias() -= update_dir_ * inv_row_;
  proj_row_ = projections_.row(slot);
  projections_.noalias() -= update_dir_ * proj_row_;

  indices_[static_cast<std::size_t>(slot)] = new_index;
  ++swap_count_;
  ++total_swaps_;
  if (rebuild_every_ > 0 && swap_count_ >= rebuild_every_) {
    if (!invert_current()) return swap_status::rebuild_failed;
  }
  return swap_status::ok;
}

void cone_basis::swap_vector(int slot, Eigen::Index new_index) {
  switch (try_swap(slot, new_index)) {
    case swap_status::ok: return;
    case swap_status::degenerate:
      throw degenerate_swap("swap would make the basis singular");
    case swap_status::rebuild_failed:
      throw singular_basis("rebuild hit a singular basis");
  }
}

Eigen::VectorXd cone_basis::solve_weights(Eigen::Index star_index) const {
  if (star_index < 0 || star_index >= cloud_->size())
    throw index_out_of_range("star index out of range");
  const Eigen::Index n = projections_.rows();
  const auto p = projections_.col(star_index);
  if (p.maxCoeff() > k_cone_eps)
    throw not_in_negative_cone("star is not in the negative cone");

  // Bordered system [[B, x*], [1^T, 1]] w = e_{n+1} eliminated blockwise:
  // w_{n+1} = 1/c and w_{1..n} = -p/c with c = 1 - sum(p). Since p <= 0,
  // c >= 1 and every weight is nonnegative.
  const double c = 1.0 - p.sum();
  Eigen::VectorXd w(n + 1);
  w.head(n) = -p / c;
  w[n] = 1.0 / c;
  return w;
}

}  // namespace recombine
