#ifndef QEV_RNG_HPP
#define QEV_RNG_HPP

#include <cmath>
#include <cstdint>

namespace qev {

// SplitMix64 (Steele/Lea/Flood mixing constants). Counter-style generator:
// the state advances by a fixed odd increment and the output is a pure mix
// of the state, so identical seeds give identical streams on any platform.
// All stochastic sampling in this project goes through this class; no OS
// entropy is ever used.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; consumes two uniforms per pair, caches the second draw
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // index into a normalized discrete distribution by CDF inversion
  template <typename Container>
  std::size_t discrete(const Container& probabilities) {
    const double u = uniform();
    double cdf = 0.0;
    std::size_t last = 0;
    std::size_t i = 0;
    for (const double p : probabilities) {
      cdf += p;
      last = i;
      if (u < cdf) return i;
      ++i;
    }
    return last;  // u fell into rounding slack at the top
  }

private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace qev

#endif
