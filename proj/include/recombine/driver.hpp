#pragma once

#include <cstdint>

#include "recombine/measure.hpp"
#include "recombine/solution.hpp"

namespace recombine {

enum class algo_kind {
  basic,
  greedy,
  greedy_reset,
  deterministic,
  divide_conquer,
  hybrid,
};

algo_kind parse_algo(std::string_view name);  // throws invalid_measure on unknown names
std::string_view to_string(algo_kind algo);

// Measure-level configuration shared by the CLI and the pipelines.
struct reduce_config {
  algo_kind algorithm = algo_kind::greedy_reset;
  std::uint64_t seed = 0;
  long long max_iterations = 0;     // 0 -> 50n (budget per attempt)
  long long reset_scale = 0;        // Las Vegas schedule scale c; 0 -> 2n
  long long groups = 0;             // divide-and-conquer G; 0 -> 50(n+1)
  int trials = 10;                  // hybrid randomized attempts per round
  long long trial_budget = 0;       // hybrid per-trial budget; 0 -> 2n^2
  int initial_basis_retries = 100;
  bool normalize = true;            // sphere-normalize before cone work
  bool shuffle_groups = false;
  double clip_tol = 1e-10;
};

// Front door: validate, drop zero weights, short-circuit trivial inputs,
// center (and by default sphere-normalize), run the selected reducer, map
// weights and indices back to the original measure.
recombination_solution reduce(const discrete_measure& measure,
                              const reduce_config& config = {});

}  // namespace recombine
