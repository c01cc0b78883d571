#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <vector>

namespace recombine {

// One SplitMix64 step. Used to mix seeds for independent substreams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic seed derivation: substream (a, b, c) of a master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

// Random stream with fixed sampling transforms so identical seeds reproduce
// identical draws on any build of this project.
class rng_stream {
 public:
  explicit rng_stream(std::uint64_t seed);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_open01() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Unbiased integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  double normal();
  double exponential() { return -std::log(uniform_open01()); }

  // k distinct indices in [0, bound), in draw order.
  void distinct_indices(Eigen::Index k, Eigen::Index bound,
                        std::vector<Eigen::Index>& out);

  void fill_gaussian(Eigen::Ref<Eigen::MatrixXd> out);
  void fill_exponential(Eigen::Ref<Eigen::MatrixXd> out);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace recombine
