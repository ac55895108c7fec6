#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "chi.hpp"
#include "ensembles.hpp"
#include "errors.hpp"
#include "hypergeometric.hpp"
#include "quadrature.hpp"
#include "rational.hpp"

namespace seplab {

// S_{d,k} = 3F2(-d-k, 2+3d+2k, 1+d; 2+2d+k, -2d-2k; 1), a finite sum.
inline Rational s_dk(int d, int k) {
  const Rational a0 = -d - k, a1 = 2 + 3 * d + 2 * k, a2 = 1 + d;
  const Rational b0 = 2 + 2 * d + k, b1 = -2 * d - 2 * k;
  Rational sum = 0, t = 1;
  for (int n = 0; n <= d + k; ++n) {
    sum += t;
    t *= (a0 + n) * (a1 + n) * (a2 + n) / ((b0 + n) * (b1 + n) * (n + 1));
  }
  return sum;
}

// Gamma(2+2d+k) Gamma(3+5d+4k) / (Gamma(2+3d+2k) Gamma(1+d+k) Gamma(1+2d+2k) d!).
inline Rational probability_prefactor(int d, int k) {
  return gamma_int(2 + 2 * d + k) * gamma_int(3 + 5 * d + 4 * k) /
         (gamma_int(2 + 3 * d + 2 * k) * gamma_int(1 + d + k) * gamma_int(1 + 2 * d + 2 * k) * factorial(d));
}

// I[p] = int_0^1 int_0^1 p(z) (t(1-t))^(m-1) (1-(1-z)t)^(-m) dt dz for a polynomial p of degree
// at most m-2, evaluated exactly: the z-integral is reduced to a rational function of t by a
// downward recursion, leaving t^(m-1) (1-t)^r h(t) with r the order of vanishing of p at z = 0,
// which a Beta sum integrates. For the separability integrand r = 3a+k.
inline Rational weighted_z_t_integral(Poly p, int m) {
  trim(p);
  if (p.empty()) return 0;
  if (static_cast<int>(p.size()) - 1 > m - 2) throw DomainError("polynomial degree exceeds m - 2");
  p.resize(m - 1, Rational(0));
  int vanish = 0;
  while (p[vanish] == 0) ++vanish;
  // gt[j] = t^(m-1) gamma_j(t), a polynomial in t.
  std::vector<Poly> gt(m - 1);
  gt[m - 2] = Poly(m - 1, Rational(0));
  gt[m - 2][m - 2] = -p[m - 2];
  const Poly one_minus_t = {Rational(1), Rational(-1)};
  for (int j = m - 3; j >= 0; --j) {
    Poly num = poly_scale(poly_mul(one_minus_t, gt[j + 1]), Rational(j + 1));
    if (static_cast<int>(num.size()) < m) num.resize(m, Rational(0));
    num[m - 1] -= p[j];
    if (num[0] != 0) throw DomainError("z-recursion lost divisibility by t");
    Poly g(num.begin() + 1, num.end());
    gt[j] = poly_scale(g, Rational(1, m - 1 - j));
  }
  Poly gsum;
  for (const auto& g : gt) gsum = poly_add(gsum, g);
  Poly n_t = poly_mul(gsum, one_minus_z_pow(m - 1));
  for (std::size_t i = 0; i < gt[0].size(); ++i) n_t[i] -= gt[0][i];
  for (int i = 0; i < m - 1 && i < static_cast<int>(n_t.size()); ++i)
    if (n_t[i] != 0) throw DomainError("z-integral numerator not divisible by t^(m-1)");
  Poly h(n_t.begin() + std::min<std::size_t>(m - 1, n_t.size()), n_t.end());
  for (int i = 0; i < vanish; ++i) h = divide_one_minus_z(h);
  trim(h);
  const int M = m, NN = vanish + 1;
  Rational sum = 0;
  for (std::size_t i = 0; i < h.size(); ++i) sum += h[i] * pochhammer(M, static_cast<int>(i)) / pochhammer(M + NN, static_cast<int>(i));
  return gamma_int(M) * gamma_int(NN) / gamma_int(M + NN) * sum;
}

// Exact separability probability for even d = 2a and induced parameter k.
inline Rational sep_prob_exact(int a, int k, const ChiPoly* chi_override = nullptr) {
  if (a < 1 || k < 0) throw DomainError("sep_prob_exact needs a >= 1, k >= 0");
  const int d = 2 * a;
  const ChiPoly chi = chi_override ? *chi_override : chi_general(a, k);
  Poly zpow(d + k + 1, Rational(0));
  zpow[d + k] = 1;
  Poly p = poly_mul(poly_mul(zpow, chi.full()), one_minus_z_pow(d));
  const int m = 3 * d + 2 * k + 2;
  const Rational integral = weighted_z_t_integral(p, m);
  return probability_prefactor(d, k) * integral / s_dk(d, k);
}

// Same route with chi = 1: the total weight, whose product with the prefactor over S_{d,k} is 1.
inline Rational total_weight_exact(int a, int k) {
  const int d = 2 * a;
  Poly zpow(d + k + 1, Rational(0));
  zpow[d + k] = 1;
  Poly p = poly_mul(zpow, one_minus_z_pow(d));
  const int m = 3 * d + 2 * k + 2;
  return weighted_z_t_integral(p, m);
}

// Closed-form induced-measure probabilities for two qubits (C), two rebits (R), two quaterbits (H).
inline Rational induced_closed_form(Field field, int k) {
  auto g = [](int twice) { return gamma_half(twice); };
  Rational r;
  int sqrt_pi = 0;
  switch (field) {
    case Field::C: {
      if (k < -2) throw DomainError("two-qubit induced formula needs k >= -2");
      const Rational kk = k;
      auto g1 = g(2 * k + 7), g2 = g(4 * k + 18), g3 = g(6 * k + 26);
      r = 3 * rpow(Rational(4), k + 3) * (2 * kk * (kk + 7) + 25) * g1.value * g2.value / g3.value;
      sqrt_pi = g1.sqrt_pi + g2.sqrt_pi - g3.sqrt_pi - 1;
      break;
    }
    case Field::R: {
      if (k < -1) throw DomainError("two-rebit induced formula needs k >= -1");
      auto g1 = g(2 * k + 4), g2 = g(4 * k + 9), g3 = g(6 * k + 14);
      r = rpow(Rational(4), k + 1) * (8 * k + 15) * g1.value * g2.value / g3.value;
      sqrt_pi = g1.sqrt_pi + g2.sqrt_pi - g3.sqrt_pi - 1;
      break;
    }
    case Field::H: {
      if (k < -1) throw DomainError("two-quaterbit induced formula needs k >= -1");
      const Rational kk = k;
      auto g1 = g(2 * k + 13), g2 = g(4 * k + 30), g3 = g(6 * k + 44);
      r = rpow(Rational(4), k + 6) * (kk * (kk * (2 * kk * (kk + 21) + 355) + 1452) + 2430) * g1.value * g2.value /
          (3 * g3.value);
      sqrt_pi = g1.sqrt_pi + g2.sqrt_pi - g3.sqrt_pi - 1;
      break;
    }
  }
  if (sqrt_pi != 0) throw DomainError("sqrt(pi) factors failed to cancel");
  return 1 - r;
}

// Share of the induced separability probability with det(rho^PT) > det(rho); alpha = d/2.
// The 6F5 at unit argument converges like n^(-3/2), so it is Levin-accelerated.
inline double q_split(int k, double alpha) {
  if (k < 0) throw DomainError("q_split needs k >= 0");
  using boost::math::tgamma;
  const BigFloat a = alpha, K = k;
  const BigFloat h = BigFloat(1) / 2;
  const BigFloat pi = boost::math::constants::pi<BigFloat>();
  BigFloat pre = a * (20 * a + 8 * K + 11) * tgamma(5 * a + 2 * K + 2) * tgamma(3 * a + K + 3 * h) *
                 tgamma(2 * a + K + 3 * h) /
                 (4 * sqrt(pi) * tgamma(5 * a + 2 * K + 7 * h) * tgamma(a + K + 2) * tgamma(4 * a + K + 2));
  const BigFloat c = 5 * a / 2 + K;
  BigFloat f = hypergeometric_big({BigFloat(1), c + 1, c + 3 * h, 2 * a + K + 3 * h, 3 * a + K + 3 * h,
                                   c + BigFloat(19) / 8},
                                  {a + K + 2, 4 * a + K + 2, c + BigFloat(7) / 4, c + BigFloat(9) / 4,
                                   c + BigFloat(11) / 8},
                                  BigFloat(1));
  return static_cast<double>(h - pre * f);
}

namespace detail {

inline BigFloat u_eta_raw(const BigFloat& eta) {
  using boost::math::tgamma;
  const BigFloat pi = boost::math::constants::pi<BigFloat>();
  const BigFloat h = BigFloat(1) / 2;
  BigFloat g = pow(BigFloat(16), 2 * eta + 3) * ((eta - 10) * eta - 5) * tgamma(eta + 3 * h) *
               pow(tgamma(eta + 5 * h), 3) / (pi * pi * (2 * eta + 3) * tgamma(4 * eta + 5));
  BigFloat num = -3 * eta * (eta + 4) * ((eta - 6) * eta - 15) + g + 60;
  return -num / (3 * pow(eta - 1, 2) * eta * eta);
}

}  // namespace detail

// Probability for chi_2 under the exponent eta: u(2) = 8/33, u(-1/2) = 1 - 256/(27 pi^2).
inline double u_eta(double eta) {
  if (!(eta >= -1.0)) throw DomainError("u_eta needs eta >= -1");
  const BigFloat e = eta;
  for (double pole : {0.0, 1.0}) {
    if (std::fabs(eta - pole) < 1e-12) {
      const BigFloat hstep("1e-12");
      return static_cast<double>((detail::u_eta_raw(pole + hstep) + detail::u_eta_raw(pole - hstep)) / 2);
    }
  }
  return static_cast<double>(detail::u_eta_raw(e));
}

// Normalization of the t-integral representation: 2^(5d+4k+2) I_{d,k}[1], exact for integer d.
inline Rational t_route_normalization_exact(int d, int k) {
  if (d < 1 || k < 0) throw DomainError("t_route_normalization needs d >= 1, k >= 0");
  const int alpha = 2 + 3 * d + 2 * k;
  Rational i1 = gamma_int(alpha) * factorial(d + k) * factorial(d) * gamma_int(1 + 2 * d + 2 * k) * s_dk(d, k) /
                (gamma_int(2 * d + k + 2) * gamma_int(3 + 5 * d + 4 * k));
  return rpow(Rational(2), 5 * d + 4 * k + 2) * i1;
}

inline double t_route_normalization(int d, int k) { return to_double(t_route_normalization_exact(d, k)); }

namespace detail {

// Fhat(z) = B(a, a) 2F1(a, a; 2a; 1 - z) = int_0^1 (t(1-t))^(a-1) (1-(1-z)t)^(-a) dt, integer a >= 1.
inline double beta_2f1(int a, double z) {
  if (z >= 0.5) {
    const double w = 1.0 - z;
    double sum = 0.0, t = 1.0;
    for (int n = 0; n < 100000; ++n) {
      sum += t;
      t *= (a + n) * static_cast<double>(a + n) / ((2.0 * a + n) * (n + 1)) * w;
      if (t < 1e-18 * sum) break;
    }
    return sum * std::exp(2 * std::lgamma(a) - std::lgamma(2.0 * a));
  }
  if (z < 0.25 / (static_cast<double>(a) * a)) {
    // Logarithmic expansion about z = 0.
    // c_n = ((a)_n / n!)^2 z^n, bracket 2 psi(n+1) - 2 psi(a+n) - log z.
    double sum = 0.0, c = 1.0, psi_n1 = -0.57721566490153286061, psi_an = psi_n1;
    for (int j = 1; j < a; ++j) psi_an += 1.0 / j;
    const double lz = std::log(z);
    for (int n = 0; n < 1000; ++n) {
      double term = c * (2 * psi_n1 - 2 * psi_an - lz);
      sum += term;
      if (n > 2 && std::fabs(term) < 1e-18 * std::fabs(sum)) break;
      const double r = (a + n) / (n + 1.0);
      c *= r * r * z;
      psi_n1 += 1.0 / (n + 1);
      psi_an += 1.0 / (a + n);
    }
    return sum;
  }
  // Legendre function of the second kind: Fhat = 2 Q_{a-1}(x) / (1-z)^a, x = (1+z)/(1-z).
  const double x = (1.0 + z) / (1.0 - z);
  const double q0 = -0.5 * std::log(z);
  auto product = [&](int top) {
    double r = 0.0;
    double prod = 1.0;
    for (int n = top; n >= 1; --n) {
      r = n / ((2.0 * n + 1.0) * x - (n + 1.0) * r);
      if (n < a) prod *= r;
    }
    return prod;
  };
  int top = a + 64;
  double prev = product(top);
  for (int it = 0; it < 40; ++it) {
    top *= 2;
    double cur = product(top);
    if (std::fabs(cur - prev) <= 1e-15 * std::fabs(cur)) return 2.0 * q0 * cur / std::pow(1.0 - z, a);
    prev = cur;
  }
  throw NonConvergence("Legendre ratio continued fraction did not converge");
}

}  // namespace detail

// Probability from the t-integral route: prefactor * I_{d,k}[chi] / S_{d,k}, with
// I[chi] = int_0^1 z^(d+k) (1-z)^d chi(z) Fhat(z) dz evaluated on a graded Gauss-Legendre mesh.
inline double t_route_probability(int d, int k, const ChiFunction& chi) {
  if (d < 1 || k < 0) throw DomainError("t_route_probability needs d >= 1, k >= 0");
  const int a = 2 + 3 * d + 2 * k;
  const GaussLegendre g = gauss_legendre(24);
  auto integrate = [&](double lo, double hi) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double z = lo + 0.5 * (hi - lo) * (g.x[i] + 1.0);
      const double omz = 1.0 - z;
      s += g.w[i] * std::pow(z, d + k) * std::pow(omz, d) * chi(z, omz) * detail::beta_2f1(a, z);
    }
    return 0.5 * (hi - lo) * s;
  };
  double total = 0.0;
  double hi = 1.0;
  for (int j = 0; j < 60; ++j) {
    const double lo = hi / 2;
    const double piece = integrate(lo, hi);
    total += piece;
    hi = lo;
    if (j > 8 && std::fabs(piece) < 1e-18 * std::fabs(total)) break;
  }
  const double pre = to_double(probability_prefactor(d, k) / s_dk(d, k));
  return pre * total;
}

}  // namespace seplab
