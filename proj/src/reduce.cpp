#include "recombine/reduce.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "recombine/rng.hpp"

namespace recombine {

namespace {

constexpr long long k_max_resets = 10000;

long long default_budget(const centered_cloud& cloud) { return 50 * cloud.dim(); }

// Single-atom result for a cloud containing a point exactly at the origin.
recombination_solution zero_atom_solution(const centered_cloud& cloud) {
  recombination_solution sol;
  sol.indices = {cloud.zero_atoms.front()};
  sol.weights = Eigen::VectorXd::Ones(1);
  sol.method = reduce_method::trivial;
  sol.tau = 0;
  return sol;
}

void sorted_insert(std::vector<Eigen::Index>& v, Eigen::Index value) {
  v.insert(std::lower_bound(v.begin(), v.end(), value), value);
}

void sorted_erase(std::vector<Eigen::Index>& v, Eigen::Index value) {
  const auto it = std::lower_bound(v.begin(), v.end(), value);
  if (it != v.end() && *it == value) v.erase(it);
}

enum class attempt_status { solved, budget_exhausted, active_exhausted, singular };

struct attempt_outcome {
  attempt_status status = attempt_status::budget_exhausted;
  Eigen::Index star = -1;
  long long tau = 0;
};

// Reusable buffers for one reduction call (possibly many reset attempts).
struct engine {
  explicit engine(const centered_cloud& c, int rebuild_every)
      : cloud(c),
        basis(c, rebuild_every),
        dots(c.size()),
        scores(c.size()),
        basis_sum(c.dim()),
        sweep_sum(c.dim()),
        direction(c.dim()) {}

  const centered_cloud& cloud;
  cone_basis basis;
  std::vector<Eigen::Index> draw;
  std::vector<Eigen::Index> active;
  Eigen::VectorXd dots;       // points * direction, full length
  Eigen::VectorXd scores;     // aligned with active positions
  Eigen::VectorXd basis_sum;  // sum of all basis vectors
  Eigen::VectorXd sweep_sum;  // sum of vectors refreshed in the current sweep
  Eigen::VectorXd direction;

  void rebuild_active_from_basis() {
    active.clear();
    active.reserve(static_cast<std::size_t>(cloud.size()));
    std::vector<Eigen::Index> sorted_basis = basis.indices();
    std::sort(sorted_basis.begin(), sorted_basis.end());
    std::size_t b = 0;
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
      if (b < sorted_basis.size() && sorted_basis[b] == i) {
        ++b;
        continue;
      }
      active.push_back(i);
    }
  }

  void compute_scores(const Eigen::VectorXd& s) {
    const auto count = static_cast<Eigen::Index>(active.size());
    if (2 * count >= cloud.size()) {
      dots.noalias() = cloud.points * s;
      for (Eigen::Index k = 0; k < count; ++k)
        scores[k] = std::abs(dots[active[static_cast<std::size_t>(k)]] - 1.0);
    } else {
      for (Eigen::Index k = 0; k < count; ++k) {
        const Eigen::Index j = active[static_cast<std::size_t>(k)];
        scores[k] = std::abs(cloud.points.row(j).dot(s) - 1.0);
      }
    }
  }
};

attempt_outcome attempt_basic(engine& eng, rng_stream& rng, long long budget,
                              reduction_stats& stats) {
  const Eigen::Index n = eng.cloud.dim();
  const Eigen::Index atoms = eng.cloud.size();
  attempt_outcome out;
  if (atoms < n) return out;  // no basis possible; budget-exhausted signal
  for (long long round = 0; round < budget; ++round) {
    ++out.tau;
    rng.distinct_indices(n, atoms, eng.draw);
    if (!eng.basis.try_reset(eng.draw)) {
      ++stats.singular_draws;
      continue;  // a singular draw still consumes a sampling round
    }
    ++stats.basis_builds;
    eng.rebuild_active_from_basis();
    const Eigen::Index star = eng.basis.deepest_negative_hit(eng.active);
    if (star >= 0) {
      out.status = attempt_status::solved;
      out.star = star;
      return out;
    }
  }
  return out;
}

attempt_outcome attempt_greedy(engine& eng, rng_stream& rng, long long budget,
                               const reduce_options& options, reduction_stats& stats) {
  const Eigen::Index n = eng.cloud.dim();
  const Eigen::Index atoms = eng.cloud.size();
  attempt_outcome out;
  if (atoms < n) return out;

  bool built = false;
  for (int tries = 0; tries < std::max(1, options.initial_basis_retries); ++tries) {
    rng.distinct_indices(n, atoms, eng.draw);
    if (eng.basis.try_reset(eng.draw)) {
      built = true;
      break;
    }
    ++stats.singular_draws;
  }
  if (!built) {
    out.status = attempt_status::singular;
    return out;
  }
  ++stats.basis_builds;

  eng.rebuild_active_from_basis();
  eng.basis_sum.setZero();
  for (const Eigen::Index b : eng.basis.indices())
    eng.basis_sum += eng.cloud.points.row(b).transpose();
  eng.sweep_sum.setZero();
  int slot = 0;

  for (long long iter = 0; iter < budget; ++iter) {
    ++out.tau;
    const Eigen::Index star = eng.basis.deepest_negative_hit(eng.active);
    if (star >= 0) {
      out.status = attempt_status::solved;
      out.star = star;
      return out;
    }

    // Prune the strict interior of the current cone; pruned points are never
    // essential to a remaining solution.
    {
      auto& act = eng.active;
      std::size_t keep = 0;
      for (std::size_t k = 0; k < act.size(); ++k) {
        if (eng.basis.in_cone_interior(act[k])) {
          ++stats.deleted;
          continue;
        }
        act[keep++] = act[k];
      }
      act.resize(keep);
    }
    if (options.deletion_hook) options.deletion_hook(eng.active, eng.basis.indices());
    if (eng.active.empty()) {
      out.status = attempt_status::active_exhausted;
      return out;
    }

    // Sweep sum: every slot refreshed so far in this pass, or all slots but
    // the first on pass entry.
    if (slot == 0) {
      eng.direction = eng.basis_sum -
                      eng.cloud.points.row(eng.basis.indices()[0]).transpose();
    } else {
      eng.direction = eng.sweep_sum;
    }
    eng.compute_scores(eng.direction);

    // Walk candidates by descending |<x,s>-1| (ascending active order makes
    // the first maximum the lowest index); skip degenerate swaps.
    const Eigen::Index old_index = eng.basis.indices()[static_cast<std::size_t>(slot)];
    Eigen::Index chosen = -1;
    const auto count = static_cast<Eigen::Index>(eng.active.size());
    while (true) {
      Eigen::Index best_pos = -1;
      double best_score = -1.0;
      for (Eigen::Index k = 0; k < count; ++k) {
        if (eng.scores[k] > best_score) {
          best_score = eng.scores[k];
          best_pos = k;
        }
      }
      if (best_pos < 0 || best_score < 0.0) break;
      const Eigen::Index candidate = eng.active[static_cast<std::size_t>(best_pos)];
      const auto status = eng.basis.try_swap(slot, candidate);
      if (status == cone_basis::swap_status::ok) {
        chosen = candidate;
        break;
      }
      if (status == cone_basis::swap_status::rebuild_failed) {
        out.status = attempt_status::singular;
        return out;
      }
      eng.scores[best_pos] = -1.0;  // degenerate; take the next-best candidate
    }
    if (chosen < 0) {
      out.status = attempt_status::active_exhausted;
      return out;
    }
    ++stats.swaps;

    sorted_erase(eng.active, chosen);
    sorted_insert(eng.active, old_index);  // replaced atom rejoins the pool

    const auto new_col = eng.cloud.points.row(chosen).transpose();
    eng.basis_sum += new_col - eng.cloud.points.row(old_index).transpose();
    if (slot == 0)
      eng.sweep_sum = new_col;
    else
      eng.sweep_sum += new_col;

    slot = (slot + 1) % static_cast<int>(n);
  }
  return out;
}

recombination_solution assemble_solution(engine& eng, const attempt_outcome& outcome,
                                         reduce_method method, long long total_tau,
                                         long long resets, reduction_stats stats) {
  const Eigen::VectorXd star_weights = eng.basis.solve_weights(outcome.star);
  std::vector<Eigen::Index> selected = eng.basis.indices();
  selected.push_back(outcome.star);
  Eigen::VectorXd weights = recover_weights(star_weights, selected, eng.cloud);

  // Canonical order: ascending atom index.
  std::vector<std::size_t> order(selected.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return selected[a] < selected[b]; });

  recombination_solution sol;
  sol.indices.resize(selected.size());
  sol.weights.resize(static_cast<Eigen::Index>(selected.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    sol.indices[i] = selected[order[i]];
    sol.weights[static_cast<Eigen::Index>(i)] = weights[static_cast<Eigen::Index>(order[i])];
  }
  sol.tau = total_tau;
  sol.resets = resets;
  sol.method = method;
  sol.stats = stats;
  return sol;
}

}  // namespace

Eigen::Index greedy_select(const centered_cloud& cloud, const cone_basis& basis,
                           int slot_counter, std::span<const Eigen::Index> active) {
  if (active.empty()) throw active_exhausted("no candidates left to select from");
  const Eigen::Index n = cloud.dim();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  if (slot_counter == 0) {
    for (Eigen::Index k = 1; k < n; ++k)
      s += cloud.points.row(basis.indices()[static_cast<std::size_t>(k)]).transpose();
  } else {
    for (int k = 0; k < slot_counter; ++k)
      s += cloud.points.row(basis.indices()[static_cast<std::size_t>(k)]).transpose();
  }
  Eigen::Index best = -1;
  double best_score = -1.0;
  for (const Eigen::Index j : active) {
    const double score = std::abs(cloud.points.row(j).dot(s) - 1.0);
    if (score > best_score || (score == best_score && j < best)) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

long long luby(long long i) {
  // i = 2^k - 1 gives 2^(k-1); otherwise recurse on the tail of the block.
  while (true) {
    long long pow2 = 2;
    while (pow2 - 1 < i) pow2 *= 2;
    if (pow2 - 1 == i) return pow2 / 2;
    i -= pow2 / 2 - 1;  // i - (2^(k-1) - 1) with 2^(k-1) <= i < 2^k - 1
  }
}

recombination_solution reduce_basic(const centered_cloud& cloud,
                                    const reduce_options& options) {
  if (!cloud.zero_atoms.empty()) return zero_atom_solution(cloud);
  engine eng(cloud, options.rebuild_every);
  rng_stream rng(options.seed);
  reduction_stats stats;
  const long long budget =
      options.max_iterations > 0 ? options.max_iterations : default_budget(cloud);
  const attempt_outcome out = attempt_basic(eng, rng, budget, stats);
  if (out.status != attempt_status::solved)
    throw not_found("no negative-cone hit within the iteration budget");
  return assemble_solution(eng, out, reduce_method::basic, out.tau, 0, stats);
}

std::optional<recombination_solution> try_reduce_greedy(const centered_cloud& cloud,
                                                        const reduce_options& options,
                                                        reduce_failure* failure,
                                                        reduction_stats* failure_stats) {
  if (failure) *failure = reduce_failure::none;
  if (!cloud.zero_atoms.empty()) return zero_atom_solution(cloud);
  engine eng(cloud, options.rebuild_every);
  rng_stream rng(options.seed);
  reduction_stats stats;
  const long long budget =
      options.max_iterations > 0 ? options.max_iterations : default_budget(cloud);
  const attempt_outcome out = attempt_greedy(eng, rng, budget, options, stats);
  if (out.status == attempt_status::solved)
    return assemble_solution(eng, out, reduce_method::greedy, out.tau, 0, stats);
  if (failure_stats) *failure_stats = stats;
  if (failure) {
    switch (out.status) {
      case attempt_status::budget_exhausted: *failure = reduce_failure::budget_exhausted; break;
      case attempt_status::active_exhausted: *failure = reduce_failure::active_exhausted; break;
      case attempt_status::singular: *failure = reduce_failure::singular; break;
      case attempt_status::solved: break;
    }
  }
  return std::nullopt;
}

recombination_solution reduce_greedy(const centered_cloud& cloud,
                                     const reduce_options& options) {
  reduce_failure failure = reduce_failure::none;
  auto sol = try_reduce_greedy(cloud, options, &failure);
  if (sol) return std::move(*sol);
  switch (failure) {
    case reduce_failure::active_exhausted:
      throw active_exhausted("interior pruning emptied the candidate set");
    case reduce_failure::singular:
      throw singular_basis_persistent("could not sample an invertible basis");
    default:
      throw not_found("no negative-cone hit within the iteration budget");
  }
}

recombination_solution reduce_with_resets(const centered_cloud& cloud,
                                          reset_schedule schedule, inner_kind inner,
                                          const reduce_options& options) {
  if (!cloud.zero_atoms.empty()) return zero_atom_solution(cloud);
  if (schedule.scale <= 0) schedule.scale = 2 * cloud.dim();

  engine eng(cloud, options.rebuild_every);
  reduction_stats stats;
  long long total_tau = 0;
  long long resets = 0;

  for (long long attempt = 0;; ++attempt) {
    const long long budget = schedule.next();
    const std::uint64_t attempt_seed =
        attempt == 0 ? options.seed : derive_seed(options.seed, static_cast<std::uint64_t>(attempt));
    rng_stream rng(attempt_seed);

    attempt_outcome out;
    if (inner == inner_kind::basic) {
      out = attempt_basic(eng, rng, budget, stats);
    } else {
      out = attempt_greedy(eng, rng, budget, options, stats);
    }
    total_tau += out.tau;

    if (out.status == attempt_status::solved) {
      const reduce_method method =
          inner == inner_kind::greedy ? reduce_method::greedy_reset : reduce_method::basic;
      return assemble_solution(eng, out, method, total_tau, resets, stats);
    }
    if (out.status == attempt_status::singular)
      throw singular_basis_persistent("could not sample an invertible basis");
    ++resets;
    if (resets >= k_max_resets)
      throw give_up("reset cap reached without finding a solution");
  }
}

std::vector<Eigen::Index> warm_start_basis(const centered_cloud& cloud,
                                           const Eigen::MatrixXd& previous_points,
                                           std::uint64_t pad_seed) {
  const Eigen::Index n = cloud.dim();
  const Eigen::Index atoms = cloud.size();
  const Eigen::Index want = std::min(n, atoms);
  std::vector<char> used(static_cast<std::size_t>(atoms), 0);
  std::vector<Eigen::Index> result;
  result.reserve(static_cast<std::size_t>(want));

  const Eigen::Index guide = std::min<Eigen::Index>(previous_points.rows(), want);
  for (Eigen::Index g = 0; g < guide; ++g) {
    Eigen::Index best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < atoms; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const double dist = (cloud.points.row(i) - previous_points.row(g)).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    used[static_cast<std::size_t>(best)] = 1;
    result.push_back(best);
  }

  // Degenerate fill: not enough guide points, pad with random unused atoms.
  rng_stream rng(pad_seed);
  while (static_cast<Eigen::Index>(result.size()) < want) {
    const auto i = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(atoms)));
    if (used[static_cast<std::size_t>(i)]) continue;
    used[static_cast<std::size_t>(i)] = 1;
    result.push_back(i);
  }
  return result;
}

solution_basis make_solution_basis(const Eigen::MatrixXd& solution_points) {
  const Eigen::Index n = solution_points.cols();
  if (solution_points.rows() != n + 1)
    throw index_out_of_range("solution points must be (n+1) x n");
  Eigen::MatrixXd basis_cols(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    basis_cols.col(c) = solution_points.row(c + 1).transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_cols);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (!(pivots.maxCoeff() > 0.0) ||
      pivots.minCoeff() < cone_basis::k_pivot_ratio_min * pivots.maxCoeff())
    throw singular_basis("previous solution basis is singular");
  return {solution_points, lu.inverse()};
}

bool woodbury_feasibility(const solution_basis& previous, const Eigen::MatrixXd& rotation,
                          const Eigen::MatrixXd& perturbation) {
  const Eigen::Index n = previous.points.cols();
  if (rotation.rows() != n || rotation.cols() != n)
    throw index_out_of_range("transform must be n x n");
  if (perturbation.rows() != n + 1 || perturbation.cols() != n)
    throw index_out_of_range("perturbation must be (n+1) x n");

  Eigen::FullPivLU<Eigen::MatrixXd> rot_lu(rotation.transpose());
  if (!rot_lu.isInvertible())
    throw singular_perturbation("transform matrix is singular");

  // New basis columns: R^T B + E_b^T = R^T (B + R^{-T} E_b^T). With A the
  // stored inverse of B, (B + U)^{-1} = A (I + U A)^{-1}, U = R^{-T} E_b^T.
  const Eigen::MatrixXd u = rot_lu.solve(perturbation.bottomRows(n).transpose());
  Eigen::MatrixXd inner = Eigen::MatrixXd::Identity(n, n);
  inner.noalias() += u * previous.inverse;
  Eigen::FullPivLU<Eigen::MatrixXd> inner_lu(inner);
  const Eigen::VectorXd pivots = inner_lu.matrixLU().diagonal().cwiseAbs();
  if (!(pivots.maxCoeff() > 0.0) ||
      pivots.minCoeff() < cone_basis::k_pivot_ratio_min * pivots.maxCoeff())
    throw singular_perturbation("Woodbury inner matrix is singular");

  const Eigen::VectorXd star = previous.points.row(0).transpose() +
                               rot_lu.solve(perturbation.row(0).transpose());
  const Eigen::VectorXd proj = previous.inverse * inner_lu.solve(star);
  return (proj.array() <= k_cone_eps).all();
}

}  // namespace recombine
