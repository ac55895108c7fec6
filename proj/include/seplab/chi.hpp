#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "hypergeometric.hpp"
#include "rational.hpp"

namespace seplab {

// chi_{d,k}(z) = 1 + (1 - z)^(k+1) p(z), z = eps^2, for even d.
struct ChiPoly {
  int d = 2;
  int k = 0;
  Poly p;

  // Coefficients of chi itself.
  Poly full() const {
    Poly c = poly_mul(one_minus_z_pow(k + 1), p);
    if (c.empty()) c.push_back(0);
    c[0] += 1;
    trim(c);
    return c;
  }
  Rational operator()(const Rational& z) const { return 1 + rpow(1 - z, k + 1) * poly_eval(p, z); }
  double eval(double z) const { return eval(z, 1.0 - z); }
  double eval(double z, double one_minus_z) const {
    double q = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) q = q * z + to_double(*it);
    return 1.0 + std::pow(one_minus_z, k + 1) * q;
  }
  bool operator==(const ChiPoly& o) const { return d == o.d && k == o.k && p == o.p; }
};

// Fast double evaluator for a ChiPoly.
class ChiEvaluator {
 public:
  explicit ChiEvaluator(const ChiPoly& c) : k_(c.k), q_(poly_to_double(c.p)) {}
  double operator()(double z, double one_minus_z) const {
    return 1.0 + std::pow(one_minus_z, k_ + 1) * horner(q_, z);
  }

 private:
  int k_;
  std::vector<double> q_;
};

inline ChiPoly chi_closed(int d, int k) {
  if (k < 0) throw DomainError("chi_closed needs k >= 0");
  const Rational K = k;
  ChiPoly c{d, k, {}};
  switch (d) {
    case 2:
      c.p = {Rational(-1), 1 / (K + 3)};
      break;
    case 4:
      c.p = {Rational(-1), -(K + 1), 2 * (2 * K * K + 14 * K + 21) / ((K + 5) * (K + 6)),
             -6 * (K + 3) / ((K + 6) * (K + 7))};
      break;
    case 6:
      c.p = {Rational(-1),
             -(K + 1),
             -(K + 1) * (K + 2) / 2,
             3 * (3 * K * K * K * K + 60 * K * K * K + 423 * K * K + 1230 * K + 1264) / (2 * (K + 7) * (K + 8) * (K + 9)),
             -6 * (K + 4) * (3 * K * K + 33 * K + 80) / ((K + 8) * (K + 9) * (K + 10)),
             30 * (K + 4) * (K + 5) / ((K + 9) * (K + 10) * (K + 11))};
      break;
    default:
      throw Unsupported("chi_closed has closed forms for d in {2, 4, 6}, got d=" + std::to_string(d));
  }
  return c;
}

// General even-d coefficients from the triple-sum representation.
inline ChiPoly chi_general(int a, int k) {
  if (a < 1 || k < 0) throw DomainError("chi_general needs a >= 1, k >= 0");
  ChiPoly c{2 * a, k, {}};
  for (int i = 0; i < a; ++i) c.p.push_back(-pochhammer(k + 1, i) / factorial(i));
  const Rational pre_base = Rational(a) * rpow(gamma_int(2 * a + k + 1), 2) /
                            (gamma_int(a) * rpow(gamma_int(a + k + 1), 2) * gamma_int(3 * a + k + 1));
  for (int j = 0; j < a; ++j) {
    const Rational pre = pre_base * gamma_int(2 * a + k + 1 + j);
    Rational outer = 0;
    for (int s = 0; s <= j; ++s)
      for (int u = 0; u <= j; ++u) {
        Rational inner = 0;
        for (int i = std::max(0, s + u - j); i <= std::min(s, u); ++i)
          inner += pochhammer(-s, i) * pochhammer(-u, i) * pochhammer(2 * a + k + 1 + j, i) /
                   (factorial(i) * factorial(j - s - u + i) * pochhammer(3 * a + k + 1, i));
        Rational term = pochhammer(a + 1, s) /
                        (Rational((a + s) * (a + u)) * factorial(s) * factorial(u) * pochhammer(a + k + 1, s)) * inner;
        outer += ((u + s) % 2 ? -term : term);
      }
    c.p.push_back(-pochhammer(k + 1, a + j) / factorial(a + j) + pre * outer);
  }
  return c;
}

namespace detail {

// Gamma(1+d+k)^2 Gamma(1+d) / (2 Gamma(1+d/2+k) Gamma(1+d/2)^2 Gamma(1+3d/2+k)), even d.
inline Rational double_sum_prefactor(int d, int k) {
  const int h = d / 2;
  return rpow(gamma_int(1 + d + k), 2) * gamma_int(1 + d) /
         (2 * gamma_int(1 + h + k) * rpow(gamma_int(1 + h), 2) * gamma_int(1 + 3 * h + k));
}

inline double double_sum_prefactor_log(double d, double k) {
  return 2 * std::lgamma(1 + d + k) + std::lgamma(1 + d) - std::log(2.0) - std::lgamma(1 + d / 2 + k) -
         2 * std::lgamma(1 + d / 2) - std::lgamma(1 + 1.5 * d + k);
}

}  // namespace detail

// Exact value of the defining double sum for even d.
inline Rational chi_double_sum(int d, int k, const Rational& z) {
  if (d < 2 || d % 2 || k < 0) throw DomainError("chi_double_sum needs even d >= 2 and k >= 0");
  if (z < 0 || z > 1) throw DomainError("chi_double_sum needs z in [0, 1]");
  const int h = d / 2;
  auto F = [&](int j) {
    return hyper_exact({Rational(-h - j), Rational(h), Rational(d + k - j)},
                       {Rational(1 + h + k - j), Rational(1 + k + 3 * h)}, z);
  };
  Rational bracket = 2 * F(k);
  for (int j = 0; j < k; ++j)
    bracket += pochhammer(d, k - j) / pochhammer(h + 1, k - j) * rpow(1 - z, k - j) * F(j);
  return detail::double_sum_prefactor(d, k) * rpow(z, h) * bracket;
}

// chi_{d,0} via the regularized 3F2 master formula; any d >= 1.
inline double master_chi_z(double d, double z) {
  if (d < 1) throw DomainError("master_chi needs d >= 1");
  if (z <= 0.0) return 0.0;
  if (z > 1.0) throw DomainError("master_chi needs eps in [0, 1]");
  BigFloat f = hypergeometric_big({BigFloat(-d / 2), BigFloat(d / 2), BigFloat(d)},
                                  {BigFloat(d / 2 + 1), BigFloat(1.5 * d + 1)}, BigFloat(z));
  long double lg = 3 * std::lgamma(static_cast<long double>(d) + 1) - 3 * std::lgamma(static_cast<long double>(d) / 2 + 1) -
                   std::lgamma(1.5L * d + 1);
  return static_cast<double>(f) * static_cast<double>(std::exp(lg)) * std::pow(z, d / 2);
}

inline double master_chi(double d, double eps) {
  if (eps < 0.0 || eps > 1.0) throw DomainError("master_chi needs eps in [0, 1]");
  return master_chi_z(d, eps * eps);
}

namespace detail {

inline double half_term(double d, int k, int j, double z) {
  const double h = d / 2;
  return static_cast<double>(hypergeometric_big({BigFloat(-h - j), BigFloat(h), BigFloat(d + k - j)},
                                                {BigFloat(1 + h + k - j), BigFloat(1 + k + 3 * h)}, BigFloat(z)));
}

inline double half_prefactor(double d, int k, double z) {
  return std::exp(double_sum_prefactor_log(d, k)) * std::pow(z, d / 2);
}

}  // namespace detail

// The two complementary halves of chi_{d,k}; J + I = chi, and J = I = chi/2 at k = 0.
inline double half_J(double d, int k, double eps) {
  if (k < 0) throw DomainError("half_J needs k >= 0");
  const double z = eps * eps;
  if (z == 0.0) return 0.0;
  return detail::half_prefactor(d, k, z) * detail::half_term(d, k, k, z);
}

inline double half_I(double d, int k, double eps) {
  if (k < 0) throw DomainError("half_I needs k >= 0");
  const double z = eps * eps;
  if (z == 0.0) return 0.0;
  double sum = detail::half_term(d, k, k, z);
  double ratio = 1.0;  // (d)_{k-j} / (d/2+1)_{k-j}
  for (int j = k - 1; j >= 0; --j) {
    ratio *= (d + k - j - 1) / (d / 2 + k - j);
    sum += ratio * std::pow(1.0 - z, k - j) * detail::half_term(d, k, j, z);
  }
  return detail::half_prefactor(d, k, z) * sum;
}

// chi for k = -5/2 (d = 2): 2 ((eps^2 - 1/2) / (1 - eps^2)^(3/2) + 1/2); diverges as eps -> 1.
inline double chi_special_z(double z, double one_minus_z) {
  if (!(one_minus_z > 0.0)) throw DomainError("chi_special diverges at eps = 1");
  return 2.0 * ((z - 0.5) / (one_minus_z * std::sqrt(one_minus_z)) + 0.5);
}

inline double chi_special(double eps) {
  if (eps < 0.0 || eps >= 1.0) throw DomainError("chi_special needs eps in [0, 1)");
  const double z = eps * eps;
  return chi_special_z(z, (1.0 - eps) * (1.0 + eps));
}

}  // namespace seplab
