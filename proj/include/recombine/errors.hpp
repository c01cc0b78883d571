#pragma once

#include <stdexcept>

namespace recombine {

// Input measure violates its invariants (negative weights, bad sizes, ...).
struct invalid_measure : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A basis matrix could not be inverted (pivot ratio below tolerance).
struct singular_basis : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The initial-basis resample budget ran out; the cloud is structurally
// rank-deficient or extremely unlucky. Callers escalate to the deterministic path.
struct singular_basis_persistent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A rank-1 basis swap would make the basis singular; pick another candidate.
struct degenerate_swap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// solve_weights called for a point outside the negative cone.
struct not_in_negative_cone : std::logic_error {
  using std::logic_error::logic_error;
};

// Iteration budget exhausted without a negative-cone hit.
struct not_found : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Interior pruning emptied the candidate set (infeasible or pathological input).
struct active_exhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reset driver hit its hard cap of restarts.
struct give_up : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Brute-force oracle guard: instance too large to enumerate.
struct too_large : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// recover_weights asked to rescale an atom flagged as a zero row.
struct zero_kappa : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Woodbury inner matrix numerically singular.
struct singular_perturbation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Least-squares system has deficient column rank.
struct rank_deficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid group count for a partition.
struct bad_group_count : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct index_out_of_range : std::out_of_range {
  using std::out_of_range::out_of_range;
};

}  // namespace recombine
