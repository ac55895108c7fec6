#pragma once

#include <cmath>
#include <cstdint>

#include "errors.hpp"

namespace seplab {

inline constexpr std::uint64_t splitmix_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: output(i) = mix(key + (i+1) * golden), key derived from (seed, stream_id).
// Any index can be reached in O(1), so disjoint streams never overlap and runs are reproducible.
class CounterRng {
 public:
  static constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

  CounterRng() : CounterRng(0, 0) {}
  CounterRng(std::uint64_t seed, std::uint64_t stream_id)
      : key_(splitmix_mix(seed ^ 0x5851f42d4c957f2dULL) ^ splitmix_mix(stream_id + golden)) {}

  std::uint64_t next() { return splitmix_mix(key_ + (++counter_) * golden); }
  std::uint64_t counter() const { return counter_; }
  void set_counter(std::uint64_t c) { counter_ = c; }

  // Uniform in the open interval (0, 1), 52-bit resolution.
  double uniform() { return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

namespace detail {

// Wichura AS241 (PPND16), relative accuracy about 1e-16.
inline double as241(double p) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r + 6.7265770927008700853e+4) * r +
                4.5921953931549871457e+4) * r + 1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r + 3.9307895800092710610e+4) * r +
                2.1213794301586595867e+4) * r + 5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r + 2.41780725177450611770e-1) * r +
             1.27045825245236838258e+0) * r + 3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r + 1.51986665636164571966e-2) * r +
             1.48103976427480074590e-1) * r + 6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 1.24266094738807843860e-3) * r +
             2.65321895265761230930e-2) * r + 2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r + 1.84631831751005468180e-5) * r +
             7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -x : x;
}

}  // namespace detail

// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Fast inverse normal CDF used by both pseudo and quasi sampling paths.
inline double fast_normal(double u) { return detail::as241(u); }

// Inverse normal CDF with one Newton correction on the lower tail; upper half by symmetry.
inline double to_normal(double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("to_normal requires 0 < u < 1");
  if (u == 0.5) return 0.0;
  const bool upper = u > 0.5;
  const double p = upper ? 1.0 - u : u;
  double x = detail::as241(p);
  const double pdf = std::exp(-0.5 * x * x) * 0.39894228040143267794;
  if (pdf > 0.0) x -= (0.5 * std::erfc(-x * 0.70710678118654752440) - p) / pdf;
  return upper ? -x : x;
}

}  // namespace seplab
