#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace seplab {

namespace detail {

inline std::optional<int> terminating_index(const std::vector<Rational>& upper) {
  std::optional<int> best;
  for (const auto& a : upper) {
    if (denominator(a) == 1 && a <= 0) {
      int m = static_cast<int>(-numerator(a));
      if (!best || m < *best) best = m;
    }
  }
  return best;
}

inline std::vector<Rational> to_rationals(const std::vector<double>& v) {
  std::vector<Rational> r;
  for (double x : v) r.emplace_back(x);  // exact for binary fractions
  return r;
}

}  // namespace detail

// Coefficients c_n of a terminating pFq so that pFq(z) = sum c_n z^n.
inline Poly hyper_poly(const std::vector<Rational>& upper, const std::vector<Rational>& lower) {
  auto m = detail::terminating_index(upper);
  if (!m) throw DomainError("hyper_poly needs a non-positive integer upper parameter");
  Poly c;
  Rational t = 1;
  for (int n = 0; n <= *m; ++n) {
    c.push_back(t);
    if (n == *m) break;
    Rational num = 1, den = n + 1;
    for (const auto& a : upper) num *= a + n;
    for (const auto& b : lower) den *= b + n;
    if (den == 0) throw DomainError("hypergeometric lower parameter hits a pole");
    t *= num / den;
  }
  return c;
}

inline Rational hyper_exact(const std::vector<Rational>& upper, const std::vector<Rational>& lower, const Rational& z) {
  return poly_eval(hyper_poly(upper, lower), z);
}

struct HyperOptions {
  double rel_tol = 1e-18;
  int confirmations = 3;
  long max_terms = 100000;
  int max_levin_order = 80;
};

namespace detail {

// Levin u-transform (beta = 1) of the partial sums of sum a_n.
inline BigFloat levin_u(const std::vector<BigFloat>& s, const std::vector<BigFloat>& a, int k) {
  BigFloat num = 0, den = 0;
  const BigFloat bk = BigFloat(1 + k);
  BigFloat binom = 1;
  for (int j = 0; j <= k; ++j) {
    BigFloat w = BigFloat(1 + j);
    BigFloat omega = w * a[j];
    BigFloat c = binom * pow(w / bk, k - 1) / omega;
    if (j % 2) c = -c;
    num += c * s[j];
    den += c;
    binom = binom * (k - j) / (j + 1);
  }
  return num / den;
}

}  // namespace detail

// Generalized hypergeometric pFq(upper; lower; z) for 0 <= z <= 1.
// Terminating series are summed exactly; otherwise direct summation for z < 1/2 and a
// Levin u-transform of the partial sums for z >= 1/2 (including the unit argument).
inline BigFloat hypergeometric_big(const std::vector<BigFloat>& upper, const std::vector<BigFloat>& lower,
                                   const BigFloat& z, const HyperOptions& opt = {}) {
  long terminate_at = -1;
  for (const auto& a : upper)
    if (a <= 0 && a == floor(a)) {
      long m = static_cast<long>(-a);
      if (terminate_at < 0 || m < terminate_at) terminate_at = m;
    }
  auto ratio = [&](long n) {
    BigFloat r = z / BigFloat(n + 1);
    for (const auto& a : upper) r *= a + n;
    for (const auto& b : lower) {
      BigFloat d = b + n;
      if (d == 0) throw DomainError("hypergeometric lower parameter hits a pole");
      r /= d;
    }
    return r;
  };
  if (terminate_at >= 0) {
    BigFloat sum = 0, t = 1;
    for (long n = 0; n <= terminate_at; ++n) {
      sum += t;
      if (n < terminate_at) t *= ratio(n);
    }
    return sum;
  }
  if (z < 0 || z > 1) throw DomainError("hypergeometric argument outside [0, 1]");
  if (z == 1) {
    BigFloat excess = 0;
    for (const auto& b : lower) excess += b;
    for (const auto& a : upper) excess -= a;
    if (upper.size() != lower.size() + 1 || excess <= 0) throw DomainError("hypergeometric series diverges at unit argument");
  }
  if (z < 0.5) {
    BigFloat sum = 0, t = 1;
    int confirmed = 0;
    for (long n = 0; n < opt.max_terms; ++n) {
      sum += t;
      if (abs(t) <= opt.rel_tol * abs(sum)) {
        if (++confirmed >= opt.confirmations) return sum;
      } else {
        confirmed = 0;
      }
      t *= ratio(n);
      if (t == 0) return sum;
    }
    throw NonConvergence("hypergeometric direct summation exceeded " + std::to_string(opt.max_terms) + " terms");
  }
  // Levin transform of the series from term n0 on, given the partial sum before it.
  auto accelerate = [&](BigFloat sum, BigFloat t, long n0) -> std::optional<BigFloat> {
    std::vector<BigFloat> s, a;
    BigFloat prev = 0, best_diff = -1, best = 0;
    int confirmed = 0;
    for (int j = 0; j <= opt.max_levin_order; ++j) {
      sum += t;
      a.push_back(t);
      s.push_back(sum);
      t *= ratio(n0 + j);
      if (j < 1) continue;
      BigFloat est = detail::levin_u(s, a, j);
      BigFloat diff = abs(est - prev);
      if (j >= 2 && (best_diff < 0 || diff < best_diff)) {
        best_diff = diff;
        best = est;
      }
      if (j >= 2 && diff <= BigFloat(opt.rel_tol) * abs(est)) {
        if (++confirmed >= opt.confirmations - 1) return est;
      } else {
        confirmed = 0;
      }
      prev = est;
    }
    if (best_diff >= 0 && best_diff <= BigFloat(1e-15) * abs(best)) return best;
    return std::nullopt;
  };
  if (auto r = accelerate(0, 1, 0)) return *r;
  // Close to z = 1 the early terms mimic logarithmic convergence; summing a long head first
  // leaves a tail that is geometric enough for the transform.
  // The head is summed in long double; its rounding stays far below double resolution.
  std::vector<long double> up, lo;
  for (const auto& a : upper) up.push_back(static_cast<long double>(a));
  for (const auto& b : lower) lo.push_back(static_cast<long double>(b));
  const long double zl = static_cast<long double>(z);
  long double head = 0, t = 1, carry = 0;
  const long n0 = std::min<long>(opt.max_terms, 20000);
  for (long n = 0; n < n0; ++n) {
    long double y = t - carry, next = head + y;  // Kahan summation
    carry = (next - head) - y;
    head = next;
    long double r = zl / (n + 1);
    for (long double a : up) r *= a + n;
    for (long double b : lo) r /= b + n;
    t *= r;
    if (t == 0) return BigFloat(head);
  }
  if (auto r = accelerate(BigFloat(head) - BigFloat(carry), BigFloat(t), n0)) return *r;
  throw NonConvergence("Levin acceleration did not settle");
}

inline double hypergeometric(const std::vector<double>& upper, const std::vector<double>& lower, double z,
                             const HyperOptions& opt = {}) {
  std::vector<BigFloat> u(upper.begin(), upper.end()), l(lower.begin(), lower.end());
  return static_cast<double>(hypergeometric_big(u, l, BigFloat(z), opt));
}

// Parameter record of a hypergeometric series.
struct HyperSeries {
  std::vector<Rational> upper, lower;
  Rational z;

  // Index of an upper parameter that is a non-positive integer, when the series terminates.
  std::optional<int> termination_witness() const {
    for (std::size_t i = 0; i < upper.size(); ++i)
      if (denominator(upper[i]) == 1 && upper[i] <= 0) return static_cast<int>(i);
    return std::nullopt;
  }
  Rational exact() const { return hyper_exact(upper, lower, z); }
  double numeric(const HyperOptions& opt = {}) const {
    std::vector<BigFloat> u, l;
    for (const auto& x : upper) u.emplace_back(x);
    for (const auto& x : lower) l.emplace_back(x);
    return static_cast<double>(hypergeometric_big(u, l, BigFloat(z), opt));
  }
};

}  // namespace seplab
