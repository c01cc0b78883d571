#include <doctest.h>

#include <Eigen/QR>

#include "recombine/datagen.hpp"
#include "recombine/deterministic.hpp"
#include "recombine/driver.hpp"
#include "recombine/lsq.hpp"

using namespace recombine;

namespace {

coreset_reducer hybrid_reducer(std::uint64_t seed) {
  return [seed](const discrete_measure& m) {
    reduce_config cfg;
    cfg.algorithm = algo_kind::hybrid;
    cfg.seed = seed;
    return reduce(m, cfg);
  };
}

Eigen::MatrixXd stack_xy(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::MatrixXd xy(x.rows(), x.cols() + 1);
  xy.leftCols(x.cols()) = x;
  xy.col(x.cols()) = y;
  return xy;
}

Eigen::MatrixXd scaled_rows(const Eigen::MatrixXd& xy, const lsq_coreset& coreset) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(coreset.row_indices.size()), xy.cols());
  for (Eigen::Index r = 0; r < out.rows(); ++r)
    out.row(r) = coreset.row_scales[r] * xy.row(coreset.row_indices[static_cast<std::size_t>(r)]);
  return out;
}

}  // namespace

TEST_CASE("moment features in lexicographic pair order") {
  Eigen::VectorXd z(2);
  z << 2, 3;
  const Eigen::VectorXd f = moment_features(z);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == 4.0);
  CHECK(f[1] == 6.0);
  CHECK(f[2] == 9.0);

  CHECK(moment_feature_dim(2) == 6);
  CHECK(moment_features(Eigen::VectorXd::Zero(4)).isZero());
}

TEST_CASE("small inputs pass through with unit scales") {
  rng_stream rng(6);
  const Eigen::Index d = 1;  // feature dim 3, so the cap is 4 rows
  Eigen::MatrixXd x = gaussian_points(4, d, rng);
  Eigen::MatrixXd noise(4, 1);
  rng.fill_gaussian(noise);
  Eigen::VectorXd y = noise.col(0);
  const auto coreset = build_coreset(x, y, hybrid_reducer(1));
  CHECK(coreset.row_indices.size() == 4);
  CHECK(coreset.row_scales.isApproxToConstant(1.0, 1e-15));
}

TEST_CASE("coreset preserves the normal equations and the minimizer") {
  const auto data = synth_lsq(10000, 2, 77);
  const Eigen::MatrixXd xy = stack_xy(data.x, data.y);

  const auto coreset = build_coreset(data.x, data.y, hybrid_reducer(5));
  CHECK(coreset.row_indices.size() <= 7);  // (d+1)(d+2)/2 + 1 with d = 2

  const Eigen::MatrixXd gram_full = xy.transpose() * xy;
  const Eigen::MatrixXd reduced = scaled_rows(xy, coreset);
  const Eigen::MatrixXd gram_coreset = reduced.transpose() * reduced;
  CHECK((gram_full - gram_coreset).norm() <= 1e-8 * gram_full.norm());

  // Residual identity for arbitrary parameter vectors.
  rng_stream rng(15);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd w(2, 1);
    rng.fill_gaussian(w);
    const double full = (data.x * w.col(0) - data.y).squaredNorm();
    const double small = (reduced.leftCols(2) * w.col(0) - reduced.col(2)).squaredNorm();
    CHECK(std::abs(full - small) <= 1e-6 * std::max(1.0, full));
  }

  // The coreset minimizer matches the full least-squares solution.
  const Eigen::VectorXd full_solution = data.x.colPivHouseholderQr().solve(data.y);
  const Eigen::VectorXd coreset_solution = solve_reduced(data.x, data.y, coreset);
  CHECK((full_solution - coreset_solution).norm() <= 1e-6 * full_solution.norm());
}

TEST_CASE("exact linear data is recovered exactly") {
  const auto data = synth_lsq(3000, 3, 11, 0.0);  // zero noise: Y = X theta
  const auto coreset = build_coreset(data.x, data.y, hybrid_reducer(2));
  const Eigen::VectorXd solution = solve_reduced(data.x, data.y, coreset);
  CHECK((solution - data.theta).norm() <= 1e-8 * data.theta.norm());
}

TEST_CASE("one-dimensional slope identity") {
  const auto data = synth_lsq(5000, 1, 23);
  const auto coreset = build_coreset(data.x, data.y, hybrid_reducer(3));
  const Eigen::VectorXd solution = solve_reduced(data.x, data.y, coreset);
  const double slope_full =
      data.x.col(0).dot(data.y) / data.x.col(0).squaredNorm();
  CHECK(solution[0] == doctest::Approx(slope_full).epsilon(1e-6));
}

TEST_CASE("deterministic reducer also yields an exact coreset") {
  const auto data = synth_lsq(4000, 2, 31);
  const auto coreset = build_coreset(
      data.x, data.y, [](const discrete_measure& m) { return reduce_deterministic(m); });
  const Eigen::MatrixXd xy = stack_xy(data.x, data.y);
  const Eigen::MatrixXd reduced = scaled_rows(xy, coreset);
  CHECK((xy.transpose() * xy - reduced.transpose() * reduced).norm() <=
        1e-8 * (xy.transpose() * xy).norm());
}

TEST_CASE("rank-deficient designs are reported") {
  rng_stream rng(40);
  Eigen::MatrixXd x(300, 2);
  Eigen::MatrixXd base = gaussian_points(300, 1, rng);
  x.col(0) = base.col(0);
  x.col(1) = 2.0 * base.col(0);  // dependent columns
  Eigen::MatrixXd noise(300, 1);
  rng.fill_gaussian(noise);
  const Eigen::VectorXd y = x.col(0) + 0.01 * noise.col(0);
  const auto coreset = build_coreset(
      x, y, [](const discrete_measure& m) { return reduce_deterministic(m); });
  CHECK_THROWS_AS(solve_reduced(x, y, coreset), rank_deficient);
}
