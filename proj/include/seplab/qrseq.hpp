#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "errors.hpp"

namespace seplab {

using u128 = unsigned __int128;

// Real root > 1 of x^(s+1) = x + 1 (golden ratio for s = 1, plastic constant for s = 2).
inline double solve_phi(int s) {
  if (s < 1) throw DomainError("solve_phi requires s >= 1");
  long double x = 2.0L;
  for (int it = 0; it < 200; ++it) {
    long double xs = std::pow(x, static_cast<long double>(s));
    long double f = xs * x - x - 1.0L;
    long double fp = (s + 1) * xs - 1.0L;
    long double step = f / fp;
    x -= step;
    if (std::fabs(step) <= 1e-19L * x) break;
  }
  return static_cast<double>(x);
}

namespace detail {

using big_float = boost::multiprecision::cpp_bin_float_50;

inline big_float solve_phi_precise(int s) {
  big_float x = 2;
  for (int it = 0; it < 400; ++it) {
    big_float xs = pow(x, s);
    big_float step = (xs * x - x - 1) / ((s + 1) * xs - 1);
    x -= step;
    if (abs(step) < big_float("1e-45")) break;
  }
  return x;
}

// floor(f * 2^128) for f in [0, 1).
inline u128 to_fixed(const big_float& f) {
  big_float t = ldexp(f, 64);
  big_float hi_f = floor(t);
  auto hi = static_cast<std::uint64_t>(hi_f);
  big_float lo_f = floor(ldexp(t - hi_f, 64));
  auto lo = static_cast<std::uint64_t>(lo_f);
  return (static_cast<u128>(hi) << 64) | lo;
}

}  // namespace detail

// Additive-recurrence point set x_n = (alpha0 + n * alpha) mod 1, alpha_j = phi_s^-j.
// Coordinates are held as 128-bit fixed-point fractions, so the recurrence is exact and
// any index is reachable directly.
struct QrState {
  int s = 0;
  double phi_s = 0.0;
  double alpha0 = 0.5;
  std::uint64_t n = 0;
  std::vector<u128> alpha;
  u128 offset = 0;

  QrState() = default;
  QrState(int dim, double a0 = 0.5) : s(dim), phi_s(solve_phi(dim)), alpha0(a0) {
    if (!(a0 >= 0.0 && a0 < 1.0)) throw DomainError("alpha0 must lie in [0, 1)");
    detail::big_float phi = detail::solve_phi_precise(dim);
    detail::big_float inv = 1 / phi, pw = 1;
    alpha.resize(dim);
    for (int j = 0; j < dim; ++j) {
      pw *= inv;
      alpha[j] = detail::to_fixed(pw);
    }
    offset = detail::to_fixed(detail::big_float(a0));
  }

  // Coordinate j of point index idx, as a double in [0, 1).
  double coordinate(std::uint64_t idx, int j) const {
    u128 v = offset + static_cast<u128>(idx) * alpha[j];
    return static_cast<double>(static_cast<std::uint64_t>(v >> 64) >> 11) * 0x1.0p-53;
  }

  void point(std::uint64_t idx, double* out) const {
    for (int j = 0; j < s; ++j) out[j] = coordinate(idx, j);
  }
};

inline std::vector<double> next_point(QrState& state) {
  if (state.n >= (std::uint64_t{1} << 63)) throw DomainError("quasirandom index exhausted");
  std::vector<double> p(state.s);
  state.point(state.n, p.data());
  ++state.n;
  return p;
}

inline QrState skip_to(QrState state, std::uint64_t n0) {
  state.n = n0;
  return state;
}

}  // namespace seplab
