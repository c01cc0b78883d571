#include "recombine/lsq.hpp"

#include <Eigen/QR>
#include <cmath>

namespace recombine {

Eigen::Index moment_feature_dim(Eigen::Index d) { return (d + 1) * (d + 2) / 2; }

Eigen::VectorXd moment_features(const Eigen::VectorXd& z) {
  const Eigen::Index m = z.size();
  Eigen::VectorXd features(m * (m + 1) / 2);
  Eigen::Index out = 0;
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = a; b < m; ++b) features[out++] = z[a] * z[b];
  return features;
}

lsq_coreset build_coreset(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const coreset_reducer& reducer) {
  const Eigen::Index rows = x.rows();
  const Eigen::Index d = x.cols();
  if (y.size() != rows) throw index_out_of_range("X/Y row mismatch");
  const Eigen::Index n = moment_feature_dim(d);

  lsq_coreset coreset;
  if (rows <= n + 1) {
    coreset.row_indices.resize(static_cast<std::size_t>(rows));
    for (Eigen::Index i = 0; i < rows; ++i) coreset.row_indices[static_cast<std::size_t>(i)] = i;
    coreset.row_scales = Eigen::VectorXd::Ones(rows);
    return coreset;
  }

  discrete_measure features;
  features.points.resize(rows, n);
  Eigen::VectorXd z(d + 1);
  for (Eigen::Index i = 0; i < rows; ++i) {
    z.head(d) = x.row(i).transpose();
    z[d] = y[i];
    features.points.row(i) = moment_features(z).transpose();
  }
  features.weights = Eigen::VectorXd::Constant(rows, 1.0 / static_cast<double>(rows));

  const recombination_solution sol = reducer(features);
  coreset.row_indices = sol.indices;
  coreset.row_scales =
      (static_cast<double>(rows) * sol.weights.array()).sqrt().matrix();
  return coreset;
}

Eigen::VectorXd solve_reduced(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              const lsq_coreset& coreset) {
  const Eigen::Index d = x.cols();
  const auto k = static_cast<Eigen::Index>(coreset.row_indices.size());
  Eigen::MatrixXd xs(k, d);
  Eigen::VectorXd ys(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const Eigen::Index i = coreset.row_indices[static_cast<std::size_t>(r)];
    if (i < 0 || i >= x.rows()) throw index_out_of_range("coreset row out of range");
    xs.row(r) = coreset.row_scales[r] * x.row(i);
    ys[r] = coreset.row_scales[r] * y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
  qr.setThreshold(1e-12);
  if (qr.rank() < d) throw rank_deficient("coreset design matrix is rank deficient");
  return qr.solve(ys);
}

}  // namespace recombine
