#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

#include "recombine/errors.hpp"
#include "recombine/solution.hpp"

namespace recombine {

// A discrete probability measure: N weighted atoms in R^n (rows of points).
struct discrete_measure {
  Eigen::MatrixXd points;   // N x n
  Eigen::VectorXd weights;  // length N, nonnegative, sums to 1

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }

  // Throws invalid_measure when an invariant is broken.
  void validate() const;
};

// Atoms shifted so the weighted barycenter sits at the origin, optionally
// rescaled to unit row norms. kappas record the norms used for scaling
// (1 where unscaled) so solution weights can be mapped back.
struct centered_cloud {
  Eigen::MatrixXd points;          // N x n
  Eigen::VectorXd kappas;          // length N, positive
  Eigen::VectorXd barycenter;      // length n, the subtracted mean
  Eigen::VectorXd source_weights;  // original weights, kept for recalibration
  std::vector<Eigen::Index> zero_atoms;  // rows exactly at the barycenter
  bool scaled = false;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
};

// Subtract the weighted mean from every atom.
centered_cloud center(const discrete_measure& measure);

// Divide each nonzero row by its Euclidean norm, recording the norm in
// kappas. Zero rows are left untouched and flagged in zero_atoms.
centered_cloud normalize_sphere(centered_cloud cloud);

// Map weights found on the scaled cloud back to the unscaled one:
// w_i proportional to w*_i / kappa_i over the selected atoms, renormalized.
// Throws zero_kappa if a selected atom is a flagged zero row.
Eigen::VectorXd recover_weights(const Eigen::VectorXd& scaled_weights,
                                std::span<const Eigen::Index> selected,
                                const centered_cloud& cloud);

struct validation_report {
  Eigen::VectorXd moment_errors;  // per-coordinate |original - reduced|
  double max_moment_error = 0.0;
  Eigen::Index support_size = 0;
  double min_weight = 0.0;
  double weight_sum_deviation = 0.0;
  bool indices_distinct = true;
  bool passed = false;
};

// Check that a solution reproduces the measure's coordinate means: passes iff
// max moment error <= tol * (1 + max |moment|), weights >= -tol,
// |sum(w) - 1| <= tol and support <= n+1. Throws index_out_of_range.
validation_report validate_reduction(const discrete_measure& measure,
                                     const recombination_solution& solution,
                                     double tol);

// Clip weights in [-clip_tol, 0) to zero and renormalize. Weights below
// -clip_tol indicate a real failure and throw invalid_measure.
Eigen::VectorXd clip_weights(Eigen::VectorXd weights, double clip_tol = 1e-10);

// Shared pre-reduction handling: drops zero-weight atoms (indices remapped on
// output), short-circuits N <= n+1 inputs and atoms sitting exactly at the
// barycenter, and centers the rest.
struct prepared_input {
  discrete_measure sub;             // zero-weight atoms removed
  std::vector<Eigen::Index> kept;   // sub row -> original row
  centered_cloud cloud;             // centered, unscaled
  std::optional<recombination_solution> shortcut;  // original indices
};

prepared_input prepare_reduction(const discrete_measure& measure);

// Map a cloud-level solution back to the original measure: clip, drop
// zero-weight atoms, translate indices through prep.kept, sort ascending.
recombination_solution finalize_cloud_solution(const prepared_input& prep,
                                               recombination_solution cloud_solution,
                                               double clip_tol = 1e-10);

}  // namespace recombine
