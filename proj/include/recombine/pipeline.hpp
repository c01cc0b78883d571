#pragma once

#include <cstdint>
#include <functional>

#include "recombine/measure.hpp"
#include "recombine/solution.hpp"

namespace recombine {

// Grouping of N atoms into contiguous, approximately equal chunks, plus the
// per-group mass and barycenter once filled against a measure.
struct group_plan {
  std::vector<int> assignments;  // length N, group id per atom position
  int group_count = 0;
  Eigen::VectorXd group_weights;      // filled by fill_group_stats
  Eigen::MatrixXd group_barycenters;  // G x n, filled by fill_group_stats

  bool stats_filled() const { return group_weights.size() == group_count; }
};

// Contiguous chunks of size floor(N/G) or ceil(N/G). Throws bad_group_count.
group_plan partition_groups(Eigen::Index count, int groups);

void fill_group_stats(group_plan& plan, const discrete_measure& measure);

// One atom per group, placed at the group barycenter and carrying the group
// mass.
discrete_measure barycenter_measure(const discrete_measure& measure, group_plan& plan);

struct pipeline_options {
  std::uint64_t seed = 0;
  long long groups = 0;        // target group count G; 0 -> 50 * (n+1)
  int trials = 10;             // randomized attempts per hybrid round
  long long trial_budget = 0;  // per-trial iterations; 0 -> 2 * n * n
  bool shuffle_groups = false; // seeded shuffle before chunking (experiments)
};

// Reduces a measure to at most n+1 atoms; seed selects the substream.
using measure_reducer =
    std::function<recombination_solution(const discrete_measure&, std::uint64_t)>;

// Round loop: group, reduce the barycenter measure with `inner`, drop the
// atoms of losing groups, rescale survivors by w*_j / group_weight_j, repeat.
// Inner escalations propagate to the caller.
recombination_solution reduce_divide_conquer(const discrete_measure& measure,
                                             const measure_reducer& inner,
                                             const pipeline_options& options = {});

// Same loop, but each round tries the greedy reducer up to `trials` times
// (budgeted, one basis draw per trial) and falls back to the deterministic
// reducer when every trial fails. Always succeeds on a valid measure.
recombination_solution reduce_hybrid(const discrete_measure& measure,
                                     const pipeline_options& options = {});

}  // namespace recombine
