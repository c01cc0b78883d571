#include "recombine/datagen.hpp"

namespace recombine {

synth_kind parse_synth_kind(const std::string& name) {
  if (name == "gauss15") return synth_kind::gauss15;
  if (name == "gauss20") return synth_kind::gauss20;
  if (name == "expmix20") return synth_kind::expmix20;
  throw invalid_measure("unknown generator: " + name);
}

std::string_view to_string(synth_kind kind) {
  switch (kind) {
    case synth_kind::gauss15: return "gauss15";
    case synth_kind::gauss20: return "gauss20";
    case synth_kind::expmix20: return "expmix20";
  }
  return "unknown";
}

Eigen::Index synth_dim(synth_kind kind) {
  return kind == synth_kind::gauss15 ? 15 : 20;
}

Eigen::MatrixXd gaussian_points(Eigen::Index count, Eigen::Index dim, rng_stream& rng) {
  Eigen::MatrixXd points(count, dim);
  rng.fill_gaussian(points);
  return points;
}

Eigen::MatrixXd exp_mixture_points(Eigen::Index count, Eigen::Index dim, rng_stream& rng) {
  Eigen::VectorXd signs(dim);
  for (Eigen::Index c = 0; c < dim; ++c) signs[c] = rng.next_u64() & 1 ? 1.0 : -1.0;
  Eigen::MatrixXd points(count, dim);
  rng.fill_exponential(points);
  points.array().rowwise() *= signs.transpose().array();
  return points;
}

Eigen::MatrixXd sphere_points(Eigen::Index count, Eigen::Index dim, rng_stream& rng) {
  Eigen::MatrixXd points(count, dim);
  rng.fill_gaussian(points);
  for (Eigen::Index r = 0; r < count; ++r) {
    const double norm = points.row(r).norm();
    if (norm > 0.0) points.row(r) /= norm;
  }
  return points;
}

discrete_measure synth_measure(synth_kind kind, Eigen::Index count, std::uint64_t seed) {
  rng_stream rng(seed);
  discrete_measure measure;
  const Eigen::Index dim = synth_dim(kind);
  measure.points = kind == synth_kind::expmix20 ? exp_mixture_points(count, dim, rng)
                                                : gaussian_points(count, dim, rng);
  measure.weights = Eigen::VectorXd::Constant(count, 1.0 / static_cast<double>(count));
  return measure;
}

lsq_synth_data synth_lsq(Eigen::Index count, Eigen::Index dim, std::uint64_t seed,
                         double noise_scale) {
  rng_stream rng(seed);
  lsq_synth_data data;
  data.x.resize(count, dim);
  rng.fill_gaussian(data.x);
  data.theta.resize(dim);
  rng.fill_gaussian(data.theta);
  Eigen::MatrixXd noise(count, 1);
  rng.fill_gaussian(noise);
  data.y = data.x * data.theta + noise_scale * noise.col(0);
  return data;
}

}  // namespace recombine
