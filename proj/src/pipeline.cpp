#include "recombine/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recombine/deterministic.hpp"
#include "recombine/driver.hpp"
#include "recombine/reduce.hpp"
#include "recombine/rng.hpp"

namespace recombine {

group_plan partition_groups(Eigen::Index count, int groups) {
  if (groups < 1 || static_cast<Eigen::Index>(groups) > count)
    throw bad_group_count("group count must lie in [1, N]");
  group_plan plan;
  plan.group_count = groups;
  plan.assignments.resize(static_cast<std::size_t>(count));
  const Eigen::Index base = count / groups;
  const Eigen::Index bump = count % groups;  // first `bump` groups get one extra
  Eigen::Index pos = 0;
  for (int g = 0; g < groups; ++g) {
    const Eigen::Index size = base + (g < bump ? 1 : 0);
    for (Eigen::Index k = 0; k < size; ++k)
      plan.assignments[static_cast<std::size_t>(pos++)] = g;
  }
  return plan;
}

void fill_group_stats(group_plan& plan, const discrete_measure& measure) {
  const Eigen::Index n = measure.dim();
  if (static_cast<Eigen::Index>(plan.assignments.size()) != measure.size())
    throw bad_group_count("plan does not match measure size");
  plan.group_weights = Eigen::VectorXd::Zero(plan.group_count);
  plan.group_barycenters = Eigen::MatrixXd::Zero(plan.group_count, n);
  for (Eigen::Index i = 0; i < measure.size(); ++i) {
    const int g = plan.assignments[static_cast<std::size_t>(i)];
    plan.group_weights[g] += measure.weights[i];
    plan.group_barycenters.row(g) += measure.weights[i] * measure.points.row(i);
  }
  for (int g = 0; g < plan.group_count; ++g) {
    if (plan.group_weights[g] <= 0.0)
      throw invalid_measure("group carries no mass");
    plan.group_barycenters.row(g) /= plan.group_weights[g];
  }
}

discrete_measure barycenter_measure(const discrete_measure& measure, group_plan& plan) {
  if (!plan.stats_filled()) fill_group_stats(plan, measure);
  discrete_measure bary;
  bary.points = plan.group_barycenters;
  bary.weights = plan.group_weights;
  return bary;
}

namespace {

constexpr std::uint64_t k_shuffle_salt = 0x5348554646ull;

struct round_state {
  std::vector<Eigen::Index> atoms;  // indices into the prepared sub-measure
  std::vector<double> weights;      // aligned with atoms
};

// Shared round loop for divide-and-conquer and hybrid. `solve_round` reduces
// one round's barycenter measure.
template <typename SolveRound>
recombination_solution run_rounds(const discrete_measure& measure,
                                  const pipeline_options& options,
                                  reduce_method method, SolveRound&& solve_round) {
  prepared_input prep = prepare_reduction(measure);
  if (prep.shortcut) return *prep.shortcut;

  const Eigen::Index n = prep.sub.dim();
  const long long target_groups =
      options.groups > 0 ? std::max<long long>(options.groups, n + 2) : 50 * (n + 1);

  round_state state;
  state.atoms.resize(static_cast<std::size_t>(prep.sub.size()));
  std::iota(state.atoms.begin(), state.atoms.end(), Eigen::Index{0});
  state.weights.assign(prep.sub.weights.data(),
                       prep.sub.weights.data() + prep.sub.size());

  recombination_solution result;
  result.method = method;

  while (static_cast<Eigen::Index>(state.atoms.size()) > n + 1) {
    ++result.stats.rounds;
    const auto count = static_cast<Eigen::Index>(state.atoms.size());
    const int g_count = static_cast<int>(std::min<long long>(target_groups, count));

    std::vector<Eigen::Index> order(state.atoms.size());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    if (options.shuffle_groups) {
      rng_stream shuffle_rng(derive_seed(options.seed, k_shuffle_salt,
                                         static_cast<std::uint64_t>(result.stats.rounds)));
      shuffle_rng.shuffle(order);
    }

    group_plan plan = partition_groups(count, g_count);
    discrete_measure round_measure;
    round_measure.points.resize(count, n);
    round_measure.weights.resize(count);
    for (Eigen::Index p = 0; p < count; ++p) {
      const Eigen::Index atom = state.atoms[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])];
      round_measure.points.row(p) = prep.sub.points.row(atom);
      round_measure.weights[p] = state.weights[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])];
    }
    discrete_measure bary = barycenter_measure(round_measure, plan);

    recombination_solution inner = solve_round(bary, result.stats.rounds, result);
    result.tau += inner.tau;
    result.resets += inner.resets;
    result.stats.accumulate(inner.stats);

    // Keep the atoms of surviving groups, rescaled by w*_j / group mass.
    std::vector<Eigen::Index> group_start(static_cast<std::size_t>(g_count) + 1, 0);
    for (Eigen::Index p = 0; p < count; ++p)
      ++group_start[static_cast<std::size_t>(plan.assignments[static_cast<std::size_t>(p)]) + 1];
    for (std::size_t g = 1; g < group_start.size(); ++g) group_start[g] += group_start[g - 1];

    round_state next;
    double mass = 0.0;
    for (std::size_t k = 0; k < inner.indices.size(); ++k) {
      const auto g = static_cast<std::size_t>(inner.indices[k]);
      const double w_star = inner.weights[static_cast<Eigen::Index>(k)];
      if (w_star <= 0.0) continue;
      const double scale = w_star / plan.group_weights[static_cast<Eigen::Index>(g)];
      for (Eigen::Index p = group_start[g]; p < group_start[g + 1]; ++p) {
        const auto pos = static_cast<std::size_t>(order[static_cast<std::size_t>(p)]);
        const double w = state.weights[pos] * scale;
        next.atoms.push_back(state.atoms[pos]);
        next.weights.push_back(w);
        mass += w;
      }
    }
    const double dev = std::abs(mass - 1.0);
    if (dev > result.stats.max_round_mass_dev) result.stats.max_round_mass_dev = dev;
    state = std::move(next);
  }

  // Final assembly in original index order.
  std::vector<std::size_t> perm(state.atoms.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return state.atoms[a] < state.atoms[b];
  });
  result.indices.resize(perm.size());
  result.weights.resize(static_cast<Eigen::Index>(perm.size()));
  for (std::size_t k = 0; k < perm.size(); ++k) {
    result.indices[k] = prep.kept[static_cast<std::size_t>(state.atoms[perm[k]])];
    result.weights[static_cast<Eigen::Index>(k)] = state.weights[perm[k]];
  }
  result.weights = clip_weights(std::move(result.weights));
  result.weights /= result.weights.sum();
  if (result.tau == 0) result.tau = result.stats.rounds;
  return result;
}

}  // namespace

recombination_solution reduce_divide_conquer(const discrete_measure& measure,
                                             const measure_reducer& inner,
                                             const pipeline_options& options) {
  return run_rounds(measure, options, reduce_method::divide_conquer,
                    [&](const discrete_measure& bary, long long round,
                        recombination_solution&) {
                      return inner(bary, derive_seed(options.seed,
                                                     static_cast<std::uint64_t>(round)));
                    });
}

recombination_solution reduce_hybrid(const discrete_measure& measure,
                                     const pipeline_options& options) {
  return run_rounds(
      measure, options, reduce_method::hybrid,
      [&](const discrete_measure& bary, long long round, recombination_solution& result) {
        const Eigen::Index n = bary.dim();
        prepared_input prep = prepare_reduction(bary);
        if (prep.shortcut) return *prep.shortcut;
        const centered_cloud cloud = normalize_sphere(std::move(prep.cloud));

        reduce_options opts;
        opts.max_iterations = options.trial_budget > 0 ? options.trial_budget : 2 * n * n;
        opts.initial_basis_retries = 1;  // one basis draw per trial
        for (int trial = 0; trial < options.trials; ++trial) {
          opts.seed = derive_seed(options.seed, static_cast<std::uint64_t>(round),
                                  static_cast<std::uint64_t>(trial) + 1);
          reduction_stats failure_stats;
          auto sol = try_reduce_greedy(cloud, opts, nullptr, &failure_stats);
          if (sol) return finalize_cloud_solution(prep, std::move(*sol));
          result.stats.accumulate(failure_stats);
          ++result.stats.trial_failures;
        }
        ++result.stats.fallback_rounds;
        result.fallback_used = true;
        return reduce_deterministic(bary);
      });
}

}  // namespace recombine
