#pragma once

#include <cstdint>
#include <string>

#include "recombine/measure.hpp"
#include "recombine/rng.hpp"

namespace recombine {

// Synthetic benchmark families: standard normal clouds in 15 and 20
// dimensions, and a non-symmetric per-coordinate exponential mixture whose
// sign pattern is drawn once per call.
enum class synth_kind { gauss15, gauss20, expmix20 };

synth_kind parse_synth_kind(const std::string& name);  // throws invalid_measure
std::string_view to_string(synth_kind kind);
Eigen::Index synth_dim(synth_kind kind);

// Uniformly weighted measure of `count` atoms from the chosen family.
discrete_measure synth_measure(synth_kind kind, Eigen::Index count, std::uint64_t seed);

Eigen::MatrixXd gaussian_points(Eigen::Index count, Eigen::Index dim, rng_stream& rng);

// Each coordinate Exp(1), multiplied by a sign pattern fixed for the call.
Eigen::MatrixXd exp_mixture_points(Eigen::Index count, Eigen::Index dim, rng_stream& rng);

// Uniform on the unit sphere.
Eigen::MatrixXd sphere_points(Eigen::Index count, Eigen::Index dim, rng_stream& rng);

struct lsq_synth_data {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;      // X theta + noise
  Eigen::VectorXd theta;
};

lsq_synth_data synth_lsq(Eigen::Index count, Eigen::Index dim, std::uint64_t seed,
                         double noise_scale = 1.0);

}  // namespace recombine
