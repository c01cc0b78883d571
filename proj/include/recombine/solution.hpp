#pragma once

#include <Eigen/Core>
#include <string_view>
#include <vector>

namespace recombine {

enum class reduce_method {
  basic,
  greedy,
  greedy_reset,
  deterministic,
  divide_conquer,
  hybrid,
  trivial,
};

std::string_view to_string(reduce_method m);

// Counters describing how a reduction ran. Used by benchmarks, the CLI
// output, and the robustness assertions around the hybrid fallback.
struct reduction_stats {
  long long basis_builds = 0;    // successful full inversions
  long long singular_draws = 0;  // inversion attempts rejected as singular
  long long swaps = 0;           // rank-1 basis updates
  long long deleted = 0;         // points pruned by the interior test
  long long rounds = 0;          // divide-and-conquer rounds
  long long fallback_rounds = 0; // rounds solved by the deterministic path
  long long trial_failures = 0;  // failed randomized trials (hybrid)
  double max_round_mass_dev = 0.0;  // worst |sum(recalibrated weights) - 1|

  void accumulate(const reduction_stats& other) {
    basis_builds += other.basis_builds;
    singular_draws += other.singular_draws;
    swaps += other.swaps;
    deleted += other.deleted;
    rounds += other.rounds;
    fallback_rounds += other.fallback_rounds;
    trial_failures += other.trial_failures;
    if (other.max_round_mass_dev > max_round_mass_dev)
      max_round_mass_dev = other.max_round_mass_dev;
  }
};

// A reduced measure: at most n+1 surviving atoms of the input measure,
// carrying simplex weights that reproduce the input's coordinate means.
struct recombination_solution {
  std::vector<Eigen::Index> indices;  // into the original measure, ascending
  Eigen::VectorXd weights;            // aligned with indices; >= 0, sums to 1
  long long tau = 0;                  // main-loop iterations (0 for trivial)
  long long resets = 0;
  reduce_method method = reduce_method::trivial;
  bool fallback_used = false;
  reduction_stats stats;
};

}  // namespace recombine
