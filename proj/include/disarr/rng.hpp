#ifndef DISARR_RNG_HPP
#define DISARR_RNG_HPP

#include <cmath>
#include <cstdint>

namespace disarr {

/// SplitMix64 generator: 64-bit state, closed-form jump, trivially splittable
/// into independent per-trial streams. Output is identical across platforms,
/// which is what seeded reports are specified against.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Independent stream for trial `index` derived from this generator's seed.
  SplitMix64 split(std::uint64_t index) const {
    SplitMix64 g(state_ ^ (0x9E3779B97F4A7C15ull * (index + 0x632BE59BD9B4E019ull)));
    g.next_u64();
    return g;
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace disarr

#endif
