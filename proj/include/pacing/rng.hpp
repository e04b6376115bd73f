#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pacing {

// Seeded generator with fixed sampling algorithms so that identical seeds
// reproduce identical instances across platforms. The raw stream is
// std::mt19937_64 (standard-specified); the transforms below are pinned here
// because the <random> distribution objects are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0,1) with 53 mantissa bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive range; plain modulo (bias is irrelevant at our range sizes).
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool coin() { return (gen_() & 1u) != 0; }

  // Box-Muller, one deviate per call (no caching, keeps the stream simple).
  double gaussian(double mean, double sd) {
    double u1 = 1.0 - uniform();  // (0,1]
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    return mean + sd * z;
  }

  // Rejection sampling with at most 100 retries, then clamp.
  double truncated_gaussian(double mean, double sd, double lo, double hi) {
    if (sd == 0.0) return std::min(hi, std::max(lo, mean));
    for (int k = 0; k < 100; ++k) {
      double v = gaussian(mean, sd);
      if (v >= lo && v <= hi) return v;
    }
    return std::min(hi, std::max(lo, gaussian(mean, sd)));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pacing
