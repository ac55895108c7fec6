#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace seplab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw DivisionByZero("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

// Parses "p/q" or "p".
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  BigInt den(s.substr(slash + 1));
  if (den == 0) throw DivisionByZero("zero denominator in " + s);
  return Rational(BigInt(s.substr(0, slash)), den);
}

inline double to_double(const Rational& r) { return static_cast<double>(BigFloat(r)); }

inline Rational factorial(int n) {
  if (n < 0) throw DomainError("factorial of negative integer");
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

// Rising factorial (x)_n.
inline Rational pochhammer(const Rational& x, int n) {
  Rational r = 1;
  for (int i = 0; i < n; ++i) r *= x + i;
  return r;
}

inline Rational rpow(const Rational& base, int e) {
  if (e < 0) {
    if (base == 0) throw DivisionByZero("zero to a negative power");
    return 1 / rpow(base, -e);
  }
  Rational r = 1, b = base;
  for (; e; e >>= 1, b *= b)
    if (e & 1) r *= b;
  return r;
}

// Gamma at a positive integer.
inline Rational gamma_int(int n) {
  if (n <= 0) throw DomainError("Gamma pole at non-positive integer");
  return factorial(n - 1);
}

// Gamma(x) at half-integer or integer x = twice / 2, as rational * sqrt(pi)^sqrt_pi.
struct HalfGamma {
  Rational value;
  int sqrt_pi = 0;
};

inline HalfGamma gamma_half(int twice) {
  if (twice % 2 == 0) return {gamma_int(twice / 2), 0};
  // Gamma(1/2 + m) / sqrt(pi) = (2m)! / (4^m m!) for m >= 0; reflection-free recursion for m < 0.
  int m = (twice - 1) / 2;
  if (twice < 0) m = -((1 - twice) / 2);
  if (m >= 0) return {factorial(2 * m) / (rpow(Rational(4), m) * factorial(m)), 1};
  Rational v = 1;  // Gamma(1/2)
  for (int j = 0; j > m; --j) v /= Rational(2 * j - 1, 2);
  return {v, 1};
}

// Polynomials in one variable with exact coefficients, lowest degree first.
using Poly = std::vector<Rational>;

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

inline Poly poly_scale(Poly p, const Rational& c) {
  for (auto& x : p) x *= c;
  return p;
}

// (1 - z)^n
inline Poly one_minus_z_pow(int n) {
  Poly r(n + 1);
  BigInt c = 1;
  for (int i = 0; i <= n; ++i) {
    r[i] = (i % 2 ? -1 : 1) * Rational(c);
    c = c * (n - i) / (i + 1);
  }
  return r;
}

inline Rational poly_eval(const Poly& p, const Rational& z) {
  Rational r = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * z + *it;
  return r;
}

inline std::vector<double> poly_to_double(const Poly& p) {
  std::vector<double> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = to_double(p[i]);
  return r;
}

inline double horner(const std::vector<double>& c, double z) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
  return r;
}

inline Poly poly_derivative(const Poly& p) {
  Poly r;
  for (std::size_t i = 1; i < p.size(); ++i) r.push_back(p[i] * static_cast<long>(i));
  return r;
}

// Quotient of p by (1 - z); throws if the division is not exact.
inline Poly divide_one_minus_z(const Poly& p) {
  if (p.empty()) return {};
  // p_i = q_i - q_{i-1}, so q_{i-1} = q_i - p_i from the top; p_0 = q_0 must hold.
  Poly q(p.size() - 1, Rational(0));
  Rational qi = 0;
  for (std::size_t i = p.size() - 1; i >= 1; --i) {
    qi -= p[i];
    q[i - 1] = qi;
  }
  if (p[0] != (q.empty() ? Rational(0) : q[0])) throw DomainError("polynomial not divisible by (1 - z)");
  return q;
}

}  // namespace seplab
