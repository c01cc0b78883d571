#include "recombine/rng.hpp"

#include <cmath>
#include <numbers>

namespace recombine {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  std::uint64_t state = seed ^ 0xd1b54a32d192ed03ull;
  splitmix64_next(state);
  state ^= a;
  splitmix64_next(state);
  state ^= b;
  splitmix64_next(state);
  state ^= c;
  return splitmix64_next(state);
}

rng_stream::rng_stream(std::uint64_t seed) {
  std::uint64_t s = seed;
  engine_.seed(splitmix64_next(s));
}

std::uint64_t rng_stream::below(std::uint64_t bound) {
  // Rejection sampling to kill modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double rng_stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_open01()));
  const double theta = 2.0 * std::numbers::pi * uniform01();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

void rng_stream::distinct_indices(Eigen::Index k, Eigen::Index bound,
                                  std::vector<Eigen::Index>& out) {
  out.clear();
  out.reserve(static_cast<std::size_t>(k));
  while (static_cast<Eigen::Index>(out.size()) < k) {
    const auto candidate = static_cast<Eigen::Index>(below(static_cast<std::uint64_t>(bound)));
    bool seen = false;
    for (const auto existing : out) {
      if (existing == candidate) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(candidate);
  }
}

void rng_stream::fill_gaussian(Eigen::Ref<Eigen::MatrixXd> out) {
  // Box-Muller in column-major order; independent of the standard library's
  // normal_distribution internals.
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    for (Eigen::Index r = 0; r + 1 < out.rows(); r += 2) {
      const double mag = std::sqrt(-2.0 * std::log(uniform_open01()));
      const double theta = 2.0 * std::numbers::pi * uniform01();
      out(r, c) = mag * std::cos(theta);
      out(r + 1, c) = mag * std::sin(theta);
    }
    if (out.rows() % 2 != 0) out(out.rows() - 1, c) = normal();
  }
}

void rng_stream::fill_exponential(Eigen::Ref<Eigen::MatrixXd> out) {
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    for (Eigen::Index r = 0; r < out.rows(); ++r) out(r, c) = exponential();
  }
}

}  // namespace recombine
