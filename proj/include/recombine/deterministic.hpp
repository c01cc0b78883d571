#pragma once

#include "recombine/measure.hpp"
#include "recombine/solution.hpp"

namespace recombine {

// Deterministic Caratheodory reduction by kernel-vector weight elimination.
// Centers the cloud, then repeatedly shifts the weights along a null vector
// of the bordered system [points^T; 1^T] until at most n+1 atoms carry mass.
// Each shift zeroes at least one weight while preserving the barycenter, the
// total mass and nonnegativity, so it terminates on any valid measure and is
// unaffected by rank-deficient point sets.
recombination_solution reduce_deterministic(const discrete_measure& measure);

}  // namespace recombine
