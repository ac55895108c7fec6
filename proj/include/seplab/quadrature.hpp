#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "chi.hpp"
#include "errors.hpp"

namespace seplab {

struct GaussLegendre {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

inline GaussLegendre gauss_legendre(int n) {
  GaussLegendre g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    g.x[i] = -z;
    g.x[n - 1 - i] = z;
    g.w[i] = g.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return g;
}

// Exponent e in the weight (1-x^2)^e (1-y^2)^e (x-y)^d.
struct ExponentRule {
  enum Kind { induced, op_monotone_sqrt, custom } kind = induced;
  int k = 0;
  double e = 0.0;

  static ExponentRule Induced(int k) { return {induced, k, 0.0}; }
  static ExponentRule OpMonotoneSqrt(int k) { return {op_monotone_sqrt, k, 0.0}; }
  static ExponentRule Custom(double e) { return {custom, 0, e}; }

  double exponent(double d) const {
    switch (kind) {
      case induced: return d + k;
      case op_monotone_sqrt: return -d / 4 + k;
      case custom: return e;
    }
    return 0.0;
  }
};

// chi as a function of (z, 1 - z); the second argument keeps 1 - z accurate near z = 1.
using ChiFunction = std::function<double(double z, double one_minus_z)>;

struct QuadratureOptions {
  int start_order = 32;
  int max_order = 2048;
  double tolerance = 1e-10;
};

namespace detail {

// Ratio of weighted integrals of chi and of 1 over the triangle, in angles x = cos t, y = cos f,
// 0 <= t <= f <= pi, with f = t + (pi - t) v^2 so the diagonal is approached smoothly.
// For a fractional power p of sin, t and v are further remapped so that sin^p times the
// Jacobian is regular at the endpoints.
inline double triangle_ratio(const ChiFunction& chi, double d, double e, const GaussLegendre& g) {
  const double pi = std::numbers::pi;
  const int n = static_cast<int>(g.x.size());
  const double p = 2.0 * e + 1.0;
  const double a = p == std::round(p) ? 1.0 : 1.0 / (p + 1.0);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * (g.x[i] + 1.0);
    const double sa = std::pow(s, a), ra = std::pow(1.0 - s, a);
    const double u = sa / (sa + ra);
    const double du = a * sa * ra / (s * (1.0 - s) * (sa + ra) * (sa + ra));
    const double t = pi * u;
    const double wt = 0.5 * pi * du * g.w[i];
    const double st = std::sin(t);
    const double sh = std::sin(0.5 * t), ch = std::cos(0.5 * t);
    const double span = pi - t;
    const double outer = wt * std::pow(st, p);
    double inner_num = 0.0, inner_den = 0.0;
    for (int j = 0; j < n; ++j) {
      const double w = 0.5 * (g.x[j] + 1.0);
      const double v = 1.0 - std::pow(1.0 - w, a);
      const double f = t + span * v * v;
      const double jac = 0.5 * g.w[j] * 2.0 * span * v * a * std::pow(1.0 - w, a - 1.0);
      const double sf = std::sin(f);
      const double fh_s = std::sin(0.5 * f), fh_c = std::cos(0.5 * f);
      const double sp = std::sin(0.5 * (f + t));
      const double sm = std::sin(0.5 * span * v * v);
      const double diff = 2.0 * sp * sm;  // cos t - cos f
      const double wgt = jac * std::pow(sf, p) * std::pow(diff, d);
      const double ratio = sh * fh_c / (ch * fh_s);
      const double z = ratio * ratio;
      const double omz = sm * sp / (ch * ch * fh_s * fh_s);
      inner_den += wgt;
      if (wgt != 0.0) inner_num += wgt * chi(z, omz);
    }
    num += outer * inner_num;
    den += outer * inner_den;
  }
  return num / den;
}

}  // namespace detail

// Separability probability as the chi-weighted fraction of the two-variable kernel
// (1-x^2)^e (1-y^2)^e (x-y)^d on -1 <= y <= x <= 1, eps^2 = (1-x)(1+y)/((1+x)(1-y)).
inline double sep_prob_quadrature(const ChiFunction& chi, double d, ExponentRule rule,
                                  const QuadratureOptions& opt = {}) {
  const double e = rule.exponent(d);
  if (!(e > -1.0)) throw DomainError("weight exponent must exceed -1, got " + std::to_string(e));
  double prev = std::nan("");
  for (int n = opt.start_order; n <= opt.max_order; n *= 2) {
    double est = detail::triangle_ratio(chi, d, e, gauss_legendre(n));
    if (std::fabs(est - prev) < opt.tolerance) return est;
    prev = est;
  }
  throw NonConvergence("quadrature did not settle by order " + std::to_string(opt.max_order));
}

inline double sep_prob_quadrature(const ChiPoly& chi, ExponentRule rule, const QuadratureOptions& opt = {}) {
  ChiEvaluator ev(chi);
  return sep_prob_quadrature([&ev](double z, double omz) { return ev(z, omz); }, chi.d, rule, opt);
}

}  // namespace seplab
