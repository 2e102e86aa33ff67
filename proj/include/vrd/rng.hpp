#pragma once

#include <cmath>
#include <cstdint>

namespace vrd {

// Deterministic splitmix64 generator. Every sampling helper is written out
// explicitly so streams are reproducible bit-for-bit across platforms and
// standard library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }

  // Box-Muller; consumes two uniforms per pair of normals.
  double normal(double mean = 0.0, double stddev = 1.0) {
    if (have_cached_) {
      have_cached_ = false;
      return mean + stddev * cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return mean + stddev * r * std::cos(a);
  }

  // Independent child stream; used to give each image / instance its own
  // generator regardless of iteration order.
  Rng fork(uint64_t stream) const {
    Rng child(state_ ^ (0x5851f42d4c957f2dULL * (stream + 1)));
    child.next_u64();
    return child;
  }

 private:
  uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace vrd
