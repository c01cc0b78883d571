#include <doctest.h>

#include "recombine/datagen.hpp"
#include "recombine/driver.hpp"
#include "recombine/pipeline.hpp"

using namespace recombine;

namespace {

std::vector<Eigen::Index> group_sizes(const group_plan& plan) {
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(plan.group_count), 0);
  for (const int g : plan.assignments) ++sizes[static_cast<std::size_t>(g)];
  return sizes;
}

measure_reducer greedy_reset_inner() {
  return [](const discrete_measure& m, std::uint64_t seed) {
    reduce_config cfg;
    cfg.algorithm = algo_kind::greedy_reset;
    cfg.seed = seed;
    return reduce(m, cfg);
  };
}

}  // namespace

TEST_CASE("partition_groups builds near-equal contiguous chunks") {
  CHECK(group_sizes(partition_groups(10, 3)) == std::vector<Eigen::Index>{4, 3, 3});
  CHECK(group_sizes(partition_groups(7, 2)) == std::vector<Eigen::Index>{4, 3});
  CHECK(group_sizes(partition_groups(5, 5)) == std::vector<Eigen::Index>{1, 1, 1, 1, 1});
  CHECK_THROWS_AS(partition_groups(4, 0), bad_group_count);
  CHECK_THROWS_AS(partition_groups(4, 5), bad_group_count);

  const auto plan = partition_groups(10, 3);
  CHECK(plan.assignments.front() == 0);
  CHECK(plan.assignments.back() == 2);
  CHECK(std::is_sorted(plan.assignments.begin(), plan.assignments.end()));
}

TEST_CASE("barycenter_measure worked examples") {
  SUBCASE("singleton groups reproduce the measure") {
    Eigen::MatrixXd pts(3, 2);
    pts << 1, 0, 0, 1, -1, -1;
    discrete_measure m{pts, Eigen::VectorXd::Constant(3, 1.0 / 3.0)};
    auto plan = partition_groups(3, 3);
    const auto bary = barycenter_measure(m, plan);
    CHECK(bary.points.isApprox(pts, 1e-15));
    CHECK(bary.weights.isApprox(m.weights, 1e-15));
  }

  SUBCASE("one group collapses to the overall barycenter") {
    Eigen::MatrixXd pts(4, 2);
    rng_stream rng(3);
    pts = gaussian_points(4, 2, rng);
    Eigen::VectorXd w(4);
    w << 0.1, 0.2, 0.3, 0.4;
    discrete_measure m{pts, w};
    auto plan = partition_groups(4, 1);
    const auto bary = barycenter_measure(m, plan);
    CHECK(bary.points.rows() == 1);
    CHECK(bary.points.row(0).transpose().isApprox(pts.transpose() * w, 1e-14));
    CHECK(bary.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("weighted means per group") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0, 0, 2, 0, 0, 2;
    Eigen::VectorXd w(3);
    w << 0.5, 0.25, 0.25;
    discrete_measure m{pts, w};
    auto plan = partition_groups(3, 2);  // chunks {0,1} and {2}
    const auto bary = barycenter_measure(m, plan);
    CHECK(bary.weights[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(bary.points(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(bary.points(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(bary.weights[1] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(bary.points.row(1).isApprox(pts.row(2), 1e-14));

    // Plan invariants: total mass and mass-weighted barycenter are conserved.
    CHECK(plan.group_weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    const Eigen::VectorXd overall = pts.transpose() * w;
    const Eigen::VectorXd grouped = bary.points.transpose() * bary.weights;
    CHECK(grouped.isApprox(overall, 1e-14));
  }
}

TEST_CASE("divide and conquer reduces large gaussians exactly") {
  rng_stream rng(1009);
  const Eigen::Index atoms = 20000;
  const Eigen::Index dim = 5;
  discrete_measure m{gaussian_points(atoms, dim, rng),
                     Eigen::VectorXd::Constant(atoms, 1.0 / static_cast<double>(atoms))};
  pipeline_options opts;
  opts.seed = 5;
  const auto sol = reduce_divide_conquer(m, greedy_reset_inner(), opts);
  CHECK(sol.indices.size() <= static_cast<std::size_t>(dim + 1));
  CHECK(validate_reduction(m, sol, 1e-8).passed);
  CHECK(sol.method == reduce_method::divide_conquer);
  CHECK(sol.stats.rounds >= 2);
  CHECK(sol.stats.max_round_mass_dev <= 1e-10);
}

TEST_CASE("single-group-per-atom divide and conquer equals the inner reducer") {
  rng_stream rng(71);
  const Eigen::Index atoms = 120;
  const Eigen::Index dim = 4;
  discrete_measure m{gaussian_points(atoms, dim, rng),
                     Eigen::VectorXd::Constant(atoms, 1.0 / static_cast<double>(atoms))};

  pipeline_options opts;
  opts.seed = 13;
  opts.groups = atoms;  // singleton groups: one round, no real aggregation
  const auto dnc = reduce_divide_conquer(m, greedy_reset_inner(), opts);

  const auto direct = greedy_reset_inner()(m, derive_seed(13, 1));
  CHECK(dnc.indices == direct.indices);
  CHECK(dnc.weights.isApprox(direct.weights, 1e-12));
}

TEST_CASE("passthrough when the support is already small") {
  Eigen::MatrixXd pts(3, 3);
  rng_stream rng(2);
  pts = gaussian_points(3, 3, rng);
  discrete_measure m{pts, Eigen::VectorXd::Constant(3, 1.0 / 3.0)};
  const auto sol = reduce_divide_conquer(m, greedy_reset_inner(), {});
  CHECK(sol.method == reduce_method::trivial);
  CHECK(sol.indices.size() == 3);
}

TEST_CASE("hybrid solves healthy inputs without the fallback") {
  rng_stream rng(31);
  const Eigen::Index atoms = 8000;
  const Eigen::Index dim = 6;
  discrete_measure m{gaussian_points(atoms, dim, rng),
                     Eigen::VectorXd::Constant(atoms, 1.0 / static_cast<double>(atoms))};
  pipeline_options opts;
  opts.seed = 44;
  const auto sol = reduce_hybrid(m, opts);
  CHECK(validate_reduction(m, sol, 1e-8).passed);
  CHECK(sol.method == reduce_method::hybrid);
  CHECK(!sol.fallback_used);
  CHECK(sol.stats.fallback_rounds == 0);
}

TEST_CASE("hybrid falls back on rank-deficient clouds with bounded overhead") {
  rng_stream rng(312);
  Eigen::MatrixXd pts = gaussian_points(900, 6, rng);
  pts.col(5) = pts.col(2);  // duplicated feature column; every basis is singular
  discrete_measure m{pts, Eigen::VectorXd::Constant(900, 1.0 / 900.0)};

  pipeline_options opts;
  opts.seed = 7;
  opts.trials = 10;
  const auto sol = reduce_hybrid(m, opts);
  CHECK(validate_reduction(m, sol, 1e-8).passed);
  CHECK(sol.fallback_used);
  CHECK(sol.stats.fallback_rounds == sol.stats.rounds);
  // Every failed trial burned exactly one basis-inversion attempt.
  CHECK(sol.stats.trial_failures == sol.stats.rounds * opts.trials);
  CHECK(sol.stats.singular_draws == sol.stats.trial_failures);
}

TEST_CASE("hybrid with zero trials is pure deterministic divide and conquer") {
  rng_stream rng(99);
  discrete_measure m{gaussian_points(500, 3, rng),
                     Eigen::VectorXd::Constant(500, 1.0 / 500.0)};
  pipeline_options opts;
  opts.seed = 1;
  opts.trials = 0;
  const auto sol = reduce_hybrid(m, opts);
  CHECK(validate_reduction(m, sol, 1e-8).passed);
  CHECK(sol.fallback_used);
  CHECK(sol.stats.fallback_rounds == sol.stats.rounds);
  CHECK(sol.stats.trial_failures == 0);
}

TEST_CASE("seeded shuffling stays deterministic and exact") {
  rng_stream rng(4242);
  discrete_measure m{gaussian_points(3000, 4, rng),
                     Eigen::VectorXd::Constant(3000, 1.0 / 3000.0)};
  pipeline_options opts;
  opts.seed = 10;
  opts.shuffle_groups = true;
  const auto a = reduce_divide_conquer(m, greedy_reset_inner(), opts);
  const auto b = reduce_divide_conquer(m, greedy_reset_inner(), opts);
  CHECK(a.indices == b.indices);
  CHECK((a.weights.array() == b.weights.array()).all());
  CHECK(validate_reduction(m, a, 1e-8).passed);
}
