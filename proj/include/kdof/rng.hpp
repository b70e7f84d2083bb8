#pragma once

#include <cmath>
#include <cstdint>

namespace kdof {

//
// Deterministic pseudo-random stream built on splitmix64. The generator is
// platform-stable: identical seeds give identical sequences on every build,
// which the reproducibility contract of the search routines relies on.
// std::mt19937 plus the standard distributions would not give that guarantee
// (distribution output is implementation-defined).
//
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed), seed0_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform double in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // independent standard normals via Box-Muller; no cached spare, so the
  // draw count per call is fixed and substream replay stays aligned
  double normal() {
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // disjoint child stream; used to give concurrent restarts schedule-independent draws
  Rng substream(std::uint64_t idx) const {
    std::uint64_t s = seed0_ ^ (0x517cc1b727220a95ull * (idx + 1));
    s = (s ^ (s >> 33)) * 0xff51afd7ed558ccdull;
    s = (s ^ (s >> 33)) * 0xc4ceb9fe1a85ec53ull;
    return Rng(s ^ (s >> 33));
  }

 private:
  std::uint64_t state_;
  std::uint64_t seed0_;
};

}  // namespace kdof
