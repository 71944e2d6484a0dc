#ifndef BVARCAST_RNG_HPP
#define BVARCAST_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "bvarcast/common.hpp"

namespace bvarcast {

namespace detail {
// splitmix64 finalizer, used to decorrelate derived stream seeds
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
} // namespace detail

// Seeded random stream. One seed, one draw sequence; samplers never share
// an Rng across threads -- derive a stream() per chain/origin instead.
// Variate transforms are implemented here (not std::*_distribution) so the
// sequence is fixed by the seed alone, independent of standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(detail::mix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  // Deterministic substream for chain/origin `idx`.
  Rng stream(std::uint64_t idx) const {
    return Rng(detail::mix64(seed_ ^ detail::mix64(idx + 1)));
  }

  // U(0,1), strictly inside the open interval.
  double uniform() {
    // 53-bit mantissa; +0.5 keeps us off both endpoints
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  std::uint64_t uniform_index(std::uint64_t n) {
    require(n > 0, "uniform_index: empty range");
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do { x = engine_(); } while (x >= limit);
    return x % n;
  }

  // standard normal via Box-Muller, second variate cached
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Gamma(shape, rate) draw, Marsaglia-Tsang squeeze; mean = shape/rate.
inline double sample_gamma(Rng& rng, double shape, double rate) {
  require(shape > 0.0 && rate > 0.0, "sample_gamma: shape and rate must be positive");
  if (shape < 1.0) {
    // boost: G(a) = G(a+1) * U^{1/a}
    double u = rng.uniform();
    return sample_gamma(rng, shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = rng.normal();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = rng.uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

inline double sample_chi_squared(Rng& rng, double dof) {
  return sample_gamma(rng, 0.5 * dof, 0.5);
}

} // namespace bvarcast

#endif
