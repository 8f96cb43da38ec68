#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ntn {

/// Recorded in simulation reports so runs can be reproduced elsewhere.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64;substream-seed=splitmix64(seed^id*golden)";

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent stream derived from a master seed and a fixed stream id, so
/// that draws on one entity never shift another entity's sequence.
/// Conversions avoid std distributions, whose output is implementation-defined.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : gen_(splitmix64(master_seed ^ (stream_id * 0x9E3779B97F4A7C15ULL))) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    const double u = uniform01();
    return u < p;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ntn
