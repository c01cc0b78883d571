#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "recombine/cone.hpp"
#include "recombine/measure.hpp"
#include "recombine/solution.hpp"

namespace recombine {

// Options shared by the cloud-level randomized reducers. The cloud is
// expected to be centered and (by default) sphere-normalized.
struct reduce_options {
  std::uint64_t seed = 0;
  long long max_iterations = 0;     // 0 -> 50 * n
  int initial_basis_retries = 100;  // resamples before singular_basis_persistent
  int rebuild_every = 0;            // 0 -> n, negative -> never

  // Test instrumentation: called after every interior-pruning pass with the
  // surviving candidate set and the current basis.
  std::function<void(std::span<const Eigen::Index>, std::span<const Eigen::Index>)>
      deletion_hook;
};

// Uniform resampling: draw n distinct atoms per round until some atom lands
// in their negative cone. Throws not_found when the budget runs out.
recombination_solution reduce_basic(const centered_cloud& cloud,
                                    const reduce_options& options = {});

// Greedy angle maximization with interior pruning and rank-1 basis swaps.
// Throws not_found, active_exhausted or singular_basis_persistent.
recombination_solution reduce_greedy(const centered_cloud& cloud,
                                     const reduce_options& options = {});

enum class reduce_failure { none, budget_exhausted, active_exhausted, singular };

// Non-throwing reduce_greedy for drivers that fall back on failure. On
// escalation returns nullopt, reporting the reason and the attempt counters
// through the out-parameters when given.
std::optional<recombination_solution> try_reduce_greedy(
    const centered_cloud& cloud, const reduce_options& options,
    reduce_failure* failure = nullptr, reduction_stats* failure_stats = nullptr);

// The active atom maximizing |<x, s> - 1| on unit-normalized points, where s
// sums basis slots 1..n-1 when slot_counter == 0 (pass entry) and the
// already-refreshed slots 0..slot_counter-1 otherwise. Ties break to the
// lowest index. Throws active_exhausted on an empty candidate set.
Eigen::Index greedy_select(const centered_cloud& cloud, const cone_basis& basis,
                           int slot_counter, std::span<const Eigen::Index> active);

// i-th term (1-based) of the universal restart sequence 1,1,2,1,1,2,4,...
long long luby(long long i);

// Restart budgets scale * luby(1), scale * luby(2), ...
struct reset_schedule {
  long long scale = 0;  // 0 lets the reducer default it to 2n
  long long luby_position = 0;

  long long next() { return scale * luby(++luby_position); }
};

enum class inner_kind { basic, greedy };

// Las Vegas driver: run the inner reducer under successive schedule budgets,
// restarting from an independent basis after each failure. Attempt k >= 1
// draws from the substream (seed, k); attempt 0 replays the plain seed so a
// first-budget success is identical to the inner reducer alone. Gives up
// (throws give_up) after 10^4 restarts.
recombination_solution reduce_with_resets(const centered_cloud& cloud,
                                          reset_schedule schedule,
                                          inner_kind inner,
                                          const reduce_options& options = {});

// Nearest unused atom for each of the first n previous solution points;
// pads with seeded random unused indices when fewer than n are available.
std::vector<Eigen::Index> warm_start_basis(const centered_cloud& cloud,
                                           const Eigen::MatrixXd& previous_points,
                                           std::uint64_t pad_seed = 0);

// Cached inverse from a previously solved instance. Row 0 of points is the
// star atom; rows 1..n are the basis whose column-matrix inverse is stored.
struct solution_basis {
  Eigen::MatrixXd points;   // (n+1) x n
  Eigen::MatrixXd inverse;  // n x n
};

solution_basis make_solution_basis(const Eigen::MatrixXd& solution_points);

// Whether the transformed atoms rows(Y) = rows(X) * R + E still satisfy the
// negative-cone condition, with the new inverse obtained from the stored one
// through a Woodbury update instead of a fresh inversion. Throws
// singular_perturbation when the Woodbury inner matrix is singular.
bool woodbury_feasibility(const solution_basis& previous, const Eigen::MatrixXd& rotation,
                          const Eigen::MatrixXd& perturbation);

}  // namespace recombine
