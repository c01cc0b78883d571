#include "recombine/driver.hpp"

#include "recombine/deterministic.hpp"
#include "recombine/pipeline.hpp"
#include "recombine/reduce.hpp"
#include "recombine/rng.hpp"

namespace recombine {

algo_kind parse_algo(std::string_view name) {
  if (name == "basic") return algo_kind::basic;
  if (name == "greedy") return algo_kind::greedy;
  if (name == "greedy-reset") return algo_kind::greedy_reset;
  if (name == "det" || name == "deterministic") return algo_kind::deterministic;
  if (name == "dnc" || name == "divide-conquer") return algo_kind::divide_conquer;
  if (name == "hybrid") return algo_kind::hybrid;
  throw invalid_measure("unknown algorithm: " + std::string(name));
}

std::string_view to_string(algo_kind algo) {
  switch (algo) {
    case algo_kind::basic: return "basic";
    case algo_kind::greedy: return "greedy";
    case algo_kind::greedy_reset: return "greedy-reset";
    case algo_kind::deterministic: return "det";
    case algo_kind::divide_conquer: return "dnc";
    case algo_kind::hybrid: return "hybrid";
  }
  return "unknown";
}

namespace {

reduce_options cloud_options(const reduce_config& config) {
  reduce_options opts;
  opts.seed = config.seed;
  opts.max_iterations = config.max_iterations;
  opts.initial_basis_retries = config.initial_basis_retries;
  return opts;
}

pipeline_options pipeline_opts(const reduce_config& config) {
  pipeline_options opts;
  opts.seed = config.seed;
  opts.groups = config.groups;
  opts.trials = config.trials;
  opts.trial_budget = config.trial_budget;
  opts.shuffle_groups = config.shuffle_groups;
  return opts;
}

}  // namespace

recombination_solution reduce(const discrete_measure& measure, const reduce_config& config) {
  switch (config.algorithm) {
    case algo_kind::deterministic:
      return reduce_deterministic(measure);
    case algo_kind::divide_conquer: {
      // Default inner reducer: greedy with Las Vegas resets.
      reduce_config inner_cfg = config;
      inner_cfg.algorithm = algo_kind::greedy_reset;
      const measure_reducer inner = [inner_cfg](const discrete_measure& m,
                                                std::uint64_t seed) {
        reduce_config cfg = inner_cfg;
        cfg.seed = seed;
        return reduce(m, cfg);
      };
      return reduce_divide_conquer(measure, inner, pipeline_opts(config));
    }
    case algo_kind::hybrid:
      return reduce_hybrid(measure, pipeline_opts(config));
    default:
      break;
  }

  prepared_input prep = prepare_reduction(measure);
  if (prep.shortcut) return *prep.shortcut;
  centered_cloud cloud = config.normalize ? normalize_sphere(std::move(prep.cloud))
                                          : std::move(prep.cloud);

  recombination_solution sol;
  switch (config.algorithm) {
    case algo_kind::basic:
      sol = reduce_basic(cloud, cloud_options(config));
      break;
    case algo_kind::greedy:
      sol = reduce_greedy(cloud, cloud_options(config));
      break;
    case algo_kind::greedy_reset: {
      reset_schedule schedule;
      schedule.scale = config.reset_scale;
      sol = reduce_with_resets(cloud, schedule, inner_kind::greedy, cloud_options(config));
      break;
    }
    default:
      throw invalid_measure("unhandled algorithm");
  }
  return finalize_cloud_solution(prep, std::move(sol), config.clip_tol);
}

}  // namespace recombine
