#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/miller_rabin.hpp>
#include <nlohmann/json.hpp>

#include "ensembles.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace seplab {

// Prime -> exponent; negative exponents belong to the denominator.
using Factorization = std::map<BigInt, int>;

namespace detail {

inline void factor_into(BigInt v, int sign, Factorization& out) {
  if (v <= 0) throw DomainError("factorization of non-positive integer");
  for (unsigned p = 2; v > 1; p += (p == 2 ? 1 : 2)) {
    if (BigInt(p) * p > v) {
      out[v] += sign;
      return;
    }
    while (v % p == 0) {
      out[BigInt(p)] += sign;
      v /= p;
    }
    if (p > 1000000) {
      if (!boost::multiprecision::miller_rabin_test(v, 25)) throw Unsupported("cofactor too large to factor");
      out[v] += sign;
      return;
    }
  }
}

inline BigInt squarefree_part(std::uint64_t n, std::uint64_t& square_root_part) {
  square_root_part = 1;
  std::uint64_t r = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    while (n % (p * p) == 0) {
      n /= p * p;
      square_root_part *= p;
    }
  }
  r = n;
  return BigInt(r);
}

}  // namespace detail

inline Factorization factorize(const Rational& q) {
  Factorization f;
  if (q == 0) return f;
  BigInt num = abs(numerator(q));
  if (num > 1) detail::factor_into(num, 1, f);
  if (denominator(q) > 1) detail::factor_into(denominator(q), -1, f);
  for (auto it = f.begin(); it != f.end();) it = it->second == 0 ? f.erase(it) : std::next(it);
  return f;
}

inline Rational from_factorization(const Factorization& f, bool negative = false) {
  Rational r = 1;
  for (const auto& [p, e] : f) r *= e >= 0 ? Rational(pow(p, static_cast<unsigned>(e))) : 1 / Rational(pow(p, static_cast<unsigned>(-e)));
  return negative ? -r : r;
}

// coeff * pi^(pi_twice/2) * sqrt(surd), surd squarefree.
struct PiRational {
  Rational coeff = 1;
  int pi_twice = 0;
  std::uint64_t surd = 1;

  static PiRational rational(const Rational& r) { return {r, 0, 1}; }
  static PiRational pi_power(int e) { return {1, 2 * e, 1}; }
  static PiRational pi_half_power(int twice) { return {1, twice, 1}; }
  static PiRational sqrt_of(std::uint64_t n) {
    std::uint64_t root = 1;
    auto sf = detail::squarefree_part(n, root);
    return {Rational(root), 0, static_cast<std::uint64_t>(sf)};
  }
  static PiRational gamma(int twice) {
    auto g = gamma_half(twice);
    return {g.value, g.sqrt_pi, 1};
  }

  bool integral_pi_power() const { return pi_twice % 2 == 0; }
  int pi_exponent() const {
    if (!integral_pi_power()) throw DomainError("pi power is a half-integer");
    return pi_twice / 2;
  }
  Factorization factorization() const { return factorize(coeff); }
  double value() const {
    return to_double(coeff) * std::pow(std::numbers::pi, pi_twice / 2.0) * std::sqrt(static_cast<double>(surd));
  }

  friend PiRational operator*(const PiRational& a, const PiRational& b) {
    PiRational r{a.coeff * b.coeff, a.pi_twice + b.pi_twice, 1};
    std::uint64_t g = a.surd * b.surd;
    auto s = sqrt_of(g);
    r.coeff *= s.coeff;
    r.surd = s.surd;
    return r;
  }
  friend PiRational operator/(const PiRational& a, const PiRational& b) {
    if (b.coeff == 0) throw DivisionByZero("PiRational division by zero");
    // 1/sqrt(s) = sqrt(s)/s
    PiRational inv{1 / (b.coeff * b.surd), -b.pi_twice, b.surd};
    return a * inv;
  }
  friend PiRational operator*(const PiRational& a, const Rational& q) { return {a.coeff * q, a.pi_twice, a.surd}; }
  bool operator==(const PiRational& o) const {
    return coeff == o.coeff && (coeff == 0 || (pi_twice == o.pi_twice && surd == o.surd));
  }

  std::string to_string() const {
    std::string s = seplab::to_string(coeff);
    if (surd != 1) s += " sqrt(" + std::to_string(surd) + ")";
    if (pi_twice != 0) s += pi_twice % 2 ? " pi^(" + std::to_string(pi_twice) + "/2)" : " pi^" + std::to_string(pi_twice / 2);
    return s;
  }
};

inline std::string factorization_string(const Factorization& f) {
  std::string num, den;
  for (const auto& [p, e] : f) {
    std::string t = p.str() + (std::abs(e) > 1 ? "^" + std::to_string(std::abs(e)) : "");
    std::string& dst = e > 0 ? num : den;
    if (!dst.empty()) dst += " * ";
    dst += t;
  }
  if (num.empty()) num = "1";
  return den.empty() ? num : num + " / (" + den + ")";
}

inline PiRational vol_lebesgue_complex(int N) {
  if (N < 2) throw DomainError("volume needs N >= 2");
  Rational c = 1;
  for (int i = 1; i <= N - 1; ++i) c *= factorial(i);
  c /= factorial(N * N - 1);
  return {c, N * (N - 1), 1};
}

inline PiRational vol_lebesgue_real(int l) {
  if (l < 1) throw DomainError("volume needs l >= 1");
  Rational c = factorial(2 * l) / (rpow(Rational(2), l * l + l) * factorial(l) * factorial(2 * l * l + l - 1));
  for (int i = 1; i <= l - 1; ++i) c *= factorial(2 * i);
  return {c, 2 * l * l, 1};
}

inline PiRational vol_lebesgue_quaternionic(int N) {
  if (N < 2) throw DomainError("volume needs N >= 2");
  Rational c = factorial(2 * N - 2) / factorial(2 * N * N - N - 1);
  for (int i = 1; i <= N - 2; ++i) c *= factorial(2 * i);
  return {c, 2 * (N * N - N), 1};
}

inline PiRational vol_hs_complex(int N) {
  if (N < 2) throw DomainError("volume needs N >= 2");
  Rational c = rpow(Rational(2), N * (N - 1) / 2);
  for (int i = 1; i <= N; ++i) c *= gamma_int(i);
  c /= gamma_int(N * N);
  return PiRational{c, N * (N - 1), 1} * PiRational::sqrt_of(N);
}

inline PiRational vol_hs_real(int N) {
  if (N < 2) throw DomainError("volume needs N >= 2");
  // (2 pi)^(N(N-1)/4) contributes 2^(q/4) pi^(q/4) with q = N(N-1).
  const int q = N * (N - 1);
  PiRational r{rpow(Rational(2), N), 0, 1};
  r = r * PiRational::sqrt_of(N);
  PiRational two_pi = PiRational{rpow(Rational(2), q / 4), 2 * (q / 4), 1};
  if (q % 4) two_pi = two_pi * PiRational{1, 1, 1} * PiRational::sqrt_of(2);  // q = 2 mod 4: extra sqrt(2 pi)
  r = r * two_pi * PiRational::gamma(N + 1);
  for (int i = 1; i <= N; ++i) r = r * PiRational::gamma(2 + i);
  return r / (PiRational::gamma(N * (N + 1)) * PiRational::gamma(1));
}

// Multiplier turning the two-qubit (N = 4) or qubit-qutrit (N = 6) total volume into its
// induced-measure counterpart: Gamma(N^2) prod_j (j)_k / Gamma(N(N+k)).
inline Rational induced_multiplier(int N, int k) {
  if (N != 4 && N != 6) throw Unsupported("induced_multiplier supports N in {4, 6}");
  if (k < 0) throw DomainError("induced_multiplier needs k >= 0");
  Rational r = gamma_int(N * N) / gamma_int(N * (N + k));
  for (int j = 1; j <= N; ++j) r *= gamma_int(j + k) / gamma_int(j);
  return r;
}

// Same multiplier from tabulated leading constants and Pochhammer products.
inline Rational induced_multiplier_tabulated(int N, int k) {
  if (N != 4 && N != 6) throw Unsupported("induced_multiplier supports N in {4, 6}");
  const BigInt c = N == 4 ? BigInt("217945728000") : BigInt("86109566386551207747222094479360000000");
  Rational r = Rational(c) * gamma_int(k + N) / gamma_int(N * (k + N));
  for (int j = 1; j <= N - 1; ++j) r *= pochhammer(j, k);
  return r;
}

// Conjectured HS volume density of 2 x m states at qubit Bloch radius 0.
inline PiRational milz_strunz_v0(int m) {
  if (m < 2) throw DomainError("milz_strunz needs m >= 2");
  const int s = 2 * m * m;
  // 2^(6m^2 - m - 23/2) = 2^(6m^2 - m - 12) sqrt(2); pi^(2m^2 - m - 3/2).
  PiRational r{rpow(Rational(2), 6 * m * m - m - 12), 2 * (2 * m * m - m) - 3, 1};
  r = r * PiRational::sqrt_of(2) * PiRational::sqrt_of(m);
  Rational prod = 1;
  for (int k = 1; k <= 2 * m; ++k) prod *= gamma_int(k);
  r = r * prod * PiRational::gamma(1 + 2 * s);
  return r / PiRational::rational(gamma_int(4 * m * m) * gamma_int(s - 1));
}

inline PiRational milz_strunz_volume(int m, const Rational& r) {
  if (r < 0 || r > 1) throw DomainError("Bloch radius must lie in [0, 1]");
  return milz_strunz_v0(m) * rpow(1 - r * r, 2 * (m * m - 1));
}

inline double milz_strunz_volume(int m, double r) {
  if (r < 0 || r > 1) throw DomainError("Bloch radius must lie in [0, 1]");
  return milz_strunz_v0(m).value() * std::pow(1 - r * r, 2 * (m * m - 1));
}

// 4 pi int_0^1 r^2 V(r) dr, the density integrated over the Bloch ball.
inline PiRational milz_strunz_ball_integral(int m) {
  const int e = 2 * (m * m - 1);
  // int_0^1 r^2 (1-r^2)^e dr = Gamma(3/2) Gamma(e+1) / (2 Gamma(e + 5/2))
  PiRational beta = PiRational::gamma(3) * PiRational::rational(gamma_int(e + 1)) / PiRational::gamma(2 * e + 5);
  return milz_strunz_v0(m) * beta * PiRational{2, 2, 1};
}

enum class Status { proven, strongly_supported, conjectured_here };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::proven: return "proven";
    case Status::strongly_supported: return "strongly-supported";
    case Status::conjectured_here: return "conjectured-here";
  }
  return "?";
}

struct ConjectureRecord {
  Field field;
  int m_a, m_b;
  Family family;
  bool x_states = false;
  PiRational value;
  Status status;
  std::string source;

  double numeric() const { return value.value(); }
  std::string system_name() const {
    return std::string(seplab::to_string(field)) + " " + std::to_string(m_a) + "x" + std::to_string(m_b) +
           (x_states ? " X-states" : "");
  }
};

inline const std::vector<ConjectureRecord>& registry() {
  static const std::vector<ConjectureRecord> records = [] {
    auto q = [](long long n, long long d) { return PiRational::rational(make_rational(n, d)); };
    const auto hs = Family::HS();
    std::vector<ConjectureRecord> r = {
        {Field::C, 2, 2, hs, false, q(8, 33), Status::strongly_supported, "exact separability-function integration and high-precision Monte Carlo"},
        {Field::R, 2, 2, hs, false, q(29, 64), Status::proven, "formal proof via the two-rebit separability function"},
        {Field::H, 2, 2, hs, false, q(26, 323), Status::strongly_supported, "master-formula evaluation at Dyson index 4"},
        {Field::C, 2, 3, hs, false, q(27, 1000), Status::conjectured_here, "rational fit to 2.9e9 Monte Carlo draws"},
        {Field::R, 2, 3, hs, false, q(860, 6561), Status::conjectured_here, "rational fit to 3.53e9 Monte Carlo draws"},
        {Field::C, 2, 4, hs, false, q(16, 12375), Status::conjectured_here, "rational fit to Monte Carlo draws"},
        {Field::R, 2, 4, hs, false, q(201, 8192), Status::conjectured_here, "rational fit to Monte Carlo draws"},
        {Field::C, 2, 5, hs, false, q(125, 4790016), Status::conjectured_here, "rational fit to Monte Carlo draws"},
        {Field::R, 2, 5, hs, false, q(29058, 9765625), Status::conjectured_here, "rational fit to Monte Carlo draws"},
        {Field::C, 3, 3, hs, false, q(323, 3161088), Status::conjectured_here, "rational fit to Monte Carlo draws"},
        {Field::C, 2, 2, Family::Induced(1), false, q(61, 143), Status::strongly_supported, "induced-measure closed form"},
        {Field::C, 2, 2, Family::Induced(2), false, q(259, 442), Status::strongly_supported, "induced-measure closed form"},
        {Field::C, 2, 2, Family::Induced(-1), false, q(1, 14), Status::strongly_supported, "induced-measure closed form"},
        {Field::H, 2, 2, Family::Induced(1), false, q(3736, 22287), Status::strongly_supported, "induced-measure integral"},
        {Field::C, 2, 2, hs, true, q(2, 5), Status::proven, "X-state integral"},
        {Field::C, 2, 3, hs, true, q(2, 5), Status::strongly_supported, "X-state integral"},
        {Field::R, 2, 2, hs, true, PiRational{make_rational(16, 3), -4, 1}, Status::proven, "X-state integral"},
        {Field::R, 2, 3, hs, true, PiRational{make_rational(16, 3), -4, 1}, Status::conjectured_here, "Monte Carlo agreement"},
        {Field::R, 3, 3, hs, true, PiRational{make_rational(16, 3), -4, 1}, Status::conjectured_here, "Monte Carlo agreement"},
    };
    return r;
  }();
  return records;
}

inline std::optional<ConjectureRecord> lookup(Field f, int m_a, int m_b, Family family, bool x_states = false) {
  for (const auto& r : registry()) {
    if (r.field == f && r.m_a == m_a && r.m_b == m_b && r.x_states == x_states && r.family.kind == family.kind &&
        r.family.induced_k() == family.induced_k())
      return r;
  }
  return std::nullopt;
}

// Total Lebesgue volume of the system's state set.
inline PiRational total_volume(Field f, int n) {
  switch (f) {
    case Field::C: return vol_lebesgue_complex(n);
    case Field::R:
      if (n % 2) throw Unsupported("real Lebesgue volume tabulated for even N");
      return vol_lebesgue_real(n / 2);
    case Field::H: return vol_lebesgue_quaternionic(n);
  }
  return {};
}

inline PiRational separable_volume(Field f, int m_a, int m_b, const ConjectureRecord& rec) {
  if (rec.field != f || rec.m_a != m_a || rec.m_b != m_b) throw InvalidSpec("conjecture does not match the system");
  if (rec.x_states || rec.family.kind != Family::hs) throw InvalidSpec("separable volume defined for full HS state sets");
  return total_volume(f, m_a * m_b) * rec.value;
}

inline nlohmann::json to_json(const ConjectureRecord& r) {
  nlohmann::json j;
  j["system"] = {{"field", to_string(r.field)}, {"m_a", r.m_a}, {"m_b", r.m_b}, {"x_states", r.x_states}};
  j["measure"] = {{"family", r.family.kind == Family::induced ? "induced" : "hs"}, {"k", r.family.induced_k()}};
  j["value"] = to_string(r.value.coeff);
  if (r.value.pi_twice != 0) j["pi_power"] = r.value.pi_twice / 2;
  j["numeric"] = r.numeric();
  j["status"] = to_string(r.status);
  j["source"] = r.source;
  return j;
}

inline nlohmann::json registry_json() {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : registry()) a.push_back(to_json(r));
  return a;
}

}  // namespace seplab
