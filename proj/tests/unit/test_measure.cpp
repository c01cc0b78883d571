#include <doctest.h>

#include <Eigen/QR>

#include "recombine/datagen.hpp"
#include "recombine/driver.hpp"
#include "recombine/measure.hpp"
#include "recombine/oracle.hpp"

using namespace recombine;

namespace {

discrete_measure make_measure(Eigen::MatrixXd points, Eigen::VectorXd weights) {
  return {std::move(points), std::move(weights)};
}

}  // namespace

TEST_CASE("center subtracts the weighted mean") {
  Eigen::MatrixXd pts(2, 1);
  pts << 1, 3;
  const auto cloud = center(make_measure(pts, Eigen::VectorXd::Constant(2, 0.5)));
  CHECK(cloud.barycenter[0] == doctest::Approx(2.0));
  CHECK(cloud.points(0, 0) == doctest::Approx(-1.0));
  CHECK(cloud.points(1, 0) == doctest::Approx(1.0));
  CHECK(cloud.kappas.isApproxToConstant(1.0));
}

TEST_CASE("center keeps mean-zero points unchanged") {
  Eigen::MatrixXd pts(3, 2);
  pts << 1, 0, 0, 1, -1, -1;
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  const auto cloud = center(make_measure(pts, w));
  // Direct weighted mean: uniform weights over a zero-sum triangle.
  const Eigen::VectorXd mean = pts.transpose() * w;
  CHECK(mean.norm() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(cloud.barycenter.norm() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(cloud.points.isApprox(pts, 1e-15));
}

TEST_CASE("center is idempotent") {
  rng_stream rng(7);
  Eigen::MatrixXd pts = gaussian_points(20, 3, rng);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(20, 1.0 / 20.0);
  const auto once = center(make_measure(pts, w));
  const auto twice = center(make_measure(once.points, w));
  CHECK((twice.points - once.points).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(twice.barycenter.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("normalize_sphere rescales rows and flags zero atoms") {
  Eigen::MatrixXd pts(3, 2);
  pts << 3, 4, 0.6, 0.8, 0, 0;
  centered_cloud cloud;
  cloud.points = pts;
  cloud.kappas = Eigen::VectorXd::Ones(3);
  cloud.barycenter = Eigen::VectorXd::Zero(2);
  cloud.source_weights = Eigen::VectorXd::Constant(3, 1.0 / 3.0);

  const auto scaled = normalize_sphere(std::move(cloud));
  CHECK(scaled.points(0, 0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(scaled.points(0, 1) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(scaled.kappas[0] == doctest::Approx(5.0).epsilon(1e-12));
  // Already-unit row untouched.
  CHECK(scaled.points(1, 0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(scaled.kappas[1] == doctest::Approx(1.0).epsilon(1e-12));
  // Zero row flagged, kappa 1.
  CHECK(scaled.zero_atoms == std::vector<Eigen::Index>{2});
  CHECK(scaled.kappas[2] == 1.0);
  CHECK(scaled.points.row(2).norm() == 0.0);
}

TEST_CASE("recover_weights undoes the kappa scaling") {
  centered_cloud cloud;
  cloud.points = Eigen::MatrixXd::Identity(2, 2);
  cloud.kappas = Eigen::VectorXd::Ones(2);
  cloud.barycenter = Eigen::VectorXd::Zero(2);
  cloud.source_weights = Eigen::VectorXd::Constant(2, 0.5);

  Eigen::VectorXd w(2);
  w << 0.5, 0.5;
  const std::vector<Eigen::Index> sel{0, 1};

  SUBCASE("identity kappas leave weights unchanged") {
    const auto rec = recover_weights(w, sel, cloud);
    CHECK(rec.isApprox(w, 1e-15));
  }

  SUBCASE("kappas (1,2) rebalance to (2/3,1/3)") {
    cloud.kappas[1] = 2.0;
    const auto rec = recover_weights(w, sel, cloud);
    CHECK(rec[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(rec[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("recovered weights still annihilate the barycenter after scaling") {
  Eigen::MatrixXd pts(3, 2);
  pts << 1, 0, 0, 1, -1, -1;
  centered_cloud cloud;
  cloud.points = pts;
  cloud.kappas = Eigen::VectorXd::Ones(3);
  cloud.barycenter = Eigen::VectorXd::Zero(2);
  cloud.source_weights = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  const auto scaled = normalize_sphere(cloud);

  // Solve the bordered system on the scaled cloud directly.
  Eigen::MatrixXd system(3, 3);
  system.topRows(2) = scaled.points.transpose();
  system.row(2).setOnes();
  Eigen::VectorXd rhs(3);
  rhs << 0, 0, 1;
  const Eigen::VectorXd w_scaled = system.colPivHouseholderQr().solve(rhs);
  REQUIRE(w_scaled.minCoeff() >= 0.0);

  const std::vector<Eigen::Index> sel{0, 1, 2};
  const auto rec = recover_weights(w_scaled, sel, scaled);
  const Eigen::VectorXd moment = pts.transpose() * rec;
  CHECK(moment.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(rec.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("recover_weights rejects flagged zero atoms") {
  centered_cloud cloud;
  cloud.points = Eigen::MatrixXd::Zero(2, 2);
  cloud.points(0, 0) = 1.0;
  cloud.kappas = Eigen::VectorXd::Ones(2);
  cloud.barycenter = Eigen::VectorXd::Zero(2);
  cloud.source_weights = Eigen::VectorXd::Constant(2, 0.5);
  cloud.zero_atoms = {1};
  Eigen::VectorXd w(2);
  w << 0.5, 0.5;
  const std::vector<Eigen::Index> sel{0, 1};
  CHECK_THROWS_AS(recover_weights(w, sel, cloud), zero_kappa);
}

TEST_CASE("validate_reduction identity and negative control") {
  Eigen::MatrixXd pts(3, 2);
  pts << 1, 0, 0, 1, -1, -1;
  const auto measure = make_measure(pts, Eigen::VectorXd::Constant(3, 1.0 / 3.0));

  recombination_solution identity;
  identity.indices = {0, 1, 2};
  identity.weights = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  identity.method = reduce_method::trivial;

  const auto good = validate_reduction(measure, identity, 1e-8);
  CHECK(good.passed);
  CHECK(good.max_moment_error == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(good.support_size == 3);

  recombination_solution corrupt = identity;
  corrupt.weights[1] = 0.5;  // breaks both moments and the mass
  const auto bad = validate_reduction(measure, corrupt, 1e-8);
  CHECK(!bad.passed);
  CHECK(bad.moment_errors[1] > 0.1);

  recombination_solution oob = identity;
  oob.indices[0] = 7;
  CHECK_THROWS_AS(validate_reduction(measure, oob, 1e-8), index_out_of_range);
}

TEST_CASE("clip_weights fixes tiny negatives and rejects real ones") {
  Eigen::VectorXd w(3);
  w << 0.6, 0.4, -5e-11;
  const auto clipped = clip_weights(w);
  CHECK(clipped[2] == 0.0);
  CHECK(clipped.sum() == doctest::Approx(1.0).epsilon(1e-14));

  w[2] = -1e-9;
  CHECK_THROWS_AS(clip_weights(w), invalid_measure);
}

TEST_CASE("prepare_reduction drops zero weights and short-circuits") {
  SUBCASE("zero weights are removed with index remap") {
    Eigen::MatrixXd pts(4, 1);
    pts << 5, -1, 7, 1;
    Eigen::VectorXd w(4);
    w << 0.0, 0.5, 0.0, 0.5;
    const auto prep = prepare_reduction(make_measure(pts, w));
    REQUIRE(prep.shortcut.has_value());  // two atoms left, n+1 = 2
    CHECK(prep.shortcut->indices == std::vector<Eigen::Index>{1, 3});
    CHECK(prep.shortcut->method == reduce_method::trivial);
    CHECK(prep.shortcut->tau == 0);
  }

  SUBCASE("atom exactly at the barycenter wins alone") {
    Eigen::MatrixXd pts(4, 1);
    pts << -1, 0, 1, 3;
    Eigen::VectorXd w(4);
    w << 0.25, 0.25, 0.25, 0.25;
    // barycenter = 0.75, no atom there: no shortcut
    CHECK(!prepare_reduction(make_measure(pts, w)).shortcut.has_value());

    Eigen::MatrixXd pts2(4, 1);
    pts2 << -1, 0, 1, 0.0;
    Eigen::VectorXd w2(4);
    w2 << 0.25, 0.25, 0.25, 0.25;  // barycenter exactly 0, atoms 1 and 3 match
    const auto prep = prepare_reduction(make_measure(pts2, w2));
    REQUIRE(prep.shortcut.has_value());
    CHECK(prep.shortcut->indices == std::vector<Eigen::Index>{1});
    CHECK(prep.shortcut->weights[0] == 1.0);
  }
}

TEST_CASE("sphere scaling preserves oracle feasibility") {
  rng_stream rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(3));
    const Eigen::Index atoms = n + 2 + static_cast<Eigen::Index>(rng.below(4));
    Eigen::MatrixXd pts = gaussian_points(atoms, n, rng);
    if (trial % 2 == 1) pts.col(0).array() += 3.0;  // usually infeasible
    const auto raw = oracle::cloud_from_points(pts);
    const auto scaled = normalize_sphere(raw);
    CHECK(oracle::contains_zero(raw) == oracle::contains_zero(scaled));
  }
}
