#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "stream.hpp"

namespace seplab {

enum class Field { R, C, H };

inline const char* to_string(Field f) {
  switch (f) {
    case Field::R: return "R";
    case Field::C: return "C";
    case Field::H: return "H";
  }
  return "?";
}

struct Family {
  enum Kind { hs, induced, bures, interpolated } kind = hs;
  int k = 0;       // induced parameter
  double x = 0.0;  // interpolation parameter

  static Family HS() { return {hs, 0, 0.0}; }
  static Family Induced(int k) { return {induced, k, 0.0}; }
  static Family Bures() { return {bures, 0, 0.5}; }
  static Family Interpolated(double x) { return {interpolated, 0, x}; }

  // Weight of U in (y I + x U); zero for the Ginibre-only families.
  double mixing() const { return kind == bures ? 0.5 : kind == interpolated ? x : 0.0; }
  int induced_k() const { return kind == induced ? k : 0; }
  std::string name() const {
    switch (kind) {
      case hs: return "hs";
      case induced: return "induced:" + std::to_string(k);
      case bures: return "bures";
      case interpolated: return "interpolated:" + std::to_string(x);
    }
    return "?";
  }
};

struct MeasureSpec {
  Field field = Field::C;
  std::size_t m_a = 2, m_b = 2;
  Family family = Family::HS();

  std::size_t n() const { return m_a * m_b; }

  // Columns of the Ginibre factor A in rho ~ A A^dagger.
  std::size_t ginibre_cols() const {
    const long n0 = static_cast<long>(n());
    const long k = family.induced_k();
    long cols = field == Field::R ? n0 + 1 + 2 * k : n0 + k;
    return cols < 1 ? 0 : static_cast<std::size_t>(cols);
  }

  void validate() const {
    if (m_a < 1 || m_b < 1 || n() > static_cast<std::size_t>(max_order))
      throw InvalidSpec("dimensions " + std::to_string(m_a) + "x" + std::to_string(m_b) + " unsupported");
    if (family.kind == Family::induced && ginibre_cols() < 1)
      throw InvalidSpec("induced parameter k=" + std::to_string(family.k) + " leaves no Ginibre columns");
    if (family.kind == Family::interpolated && !(family.x >= 0.0 && family.x <= 1.0))
      throw InvalidSpec("interpolation parameter must lie in [0,1]");
  }
};

// Rectangular Gaussian matrix, row-major.
struct GinibreMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<cplx> entries;
  cplx& operator()(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

namespace detail {

template <class T>
inline constexpr bool is_complex_v = !std::is_same_v<T, double>;

template <class T, class S>
inline void fill_normals(S& s, T* a, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    if constexpr (is_complex_v<T>) {
      double re = s.next_normal();
      double im = s.next_normal();
      a[i] = T(re, im);
    } else {
      a[i] = s.next_normal();
    }
  }
}

// w = a a^dagger for a (rows x cols); full Hermitian result.
template <class T>
inline void gram(const T* a, int rows, int cols, T* w) {
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j <= i; ++j) {
      T s = T(0.0);
      const T* ai = a + i * cols;
      const T* aj = a + j * cols;
      for (int l = 0; l < cols; ++l) s += ai[l] * cj(aj[l]);
      w[i * rows + j] = s;
      w[j * rows + i] = cj(s);
    }
  for (int i = 0; i < rows; ++i) w[i * rows + i] = re(w[i * rows + i]);
}

// Haar-distributed unitary (orthogonal for real T): Gram-Schmidt, applied twice, on the
// columns of a Ginibre matrix. Positive R diagonal fixes the phases.
template <class T, class S>
inline void haar_into(S& s, T* u, int n) {
  fill_normals(s, u, static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        T dot = T(0.0);
        for (int r = 0; r < n; ++r) dot += cj(u[r * n + i]) * u[r * n + j];
        for (int r = 0; r < n; ++r) u[r * n + j] -= dot * u[r * n + i];
      }
    }
    double nrm = 0.0;
    for (int r = 0; r < n; ++r) nrm += abs2(u[r * n + j]);
    double inv = 1.0 / std::sqrt(nrm);
    for (int r = 0; r < n; ++r) u[r * n + j] *= inv;
  }
}

template <class T>
inline double trace_re(const T* w, int n) {
  double t = 0.0;
  for (int i = 0; i < n; ++i) t += re(w[i * n + i]);
  return t;
}

}  // namespace detail

// Draws unnormalized W = B B^dagger with B = (y I + x U) A, A Ginibre (n x cols).
// Buffers are allocated once; draw() does no allocation.
template <class T>
class DensitySampler {
 public:
  explicit DensitySampler(const MeasureSpec& spec) : spec_(spec) {
    spec.validate();
    if (spec.field == Field::H)
      throw InvalidSpec("quaternionic density matrices are not samplable by a Ginibre construction here");
    if ((spec.field == Field::R) != !detail::is_complex_v<T>)
      throw InvalidSpec("sampler scalar type does not match field");
    n_ = static_cast<int>(spec.n());
    x_ = spec.family.mixing();
    cols_ = static_cast<int>(spec.family.kind == Family::bures || spec.family.kind == Family::interpolated
                                 ? (spec.field == Field::R ? spec.n() + 1 : spec.n())
                                 : spec.ginibre_cols());
    a_.resize(static_cast<std::size_t>(n_) * cols_);
    b_.resize(a_.size());
    u_.resize(static_cast<std::size_t>(n_) * n_);
    w_.resize(static_cast<std::size_t>(n_) * n_);
    w2_.resize(w_.size());
  }

  int n() const { return n_; }
  int cols() const { return cols_; }
  const MeasureSpec& spec() const { return spec_; }
  const T* w() const { return w_.data(); }
  const T* a() const { return a_.data(); }
  const T* u() const { return u_.data(); }

  // Plain Ginibre part, shared by the coupled estimator.
  template <class S>
  void draw_ginibre(S& s) {
    s.begin_draw();
    detail::fill_normals(s, a_.data(), a_.size());
  }

  template <class S>
  void draw(S& s) {
    draw_ginibre(s);
    if (x_ == 0.0) {
      detail::gram(a_.data(), n_, cols_, w_.data());
      return;
    }
    detail::haar_into(s, u_.data(), n_);
    mix(x_, w_.data());
  }

  // After draw_ginibre: W_hs = A A^dagger and W_x = (yI+xU) A A^dagger (yI+xU^dagger) from one A.
  template <class S>
  void draw_coupled(S& s, double x) {
    draw_ginibre(s);
    detail::gram(a_.data(), n_, cols_, w_.data());
    detail::haar_into(s, u_.data(), n_);
    mix(x, w2_.data());
  }
  const T* w_mixed() const { return w2_.data(); }

 private:
  void mix(double x, T* out) {
    const double y = 1.0 - x;
    for (int i = 0; i < n_; ++i)
      for (int c = 0; c < cols_; ++c) {
        T s = T(0.0);
        for (int l = 0; l < n_; ++l) s += u_[i * n_ + l] * a_[l * cols_ + c];
        b_[i * cols_ + c] = y * a_[i * cols_ + c] + x * s;
      }
    detail::gram(b_.data(), n_, cols_, out);
  }

  MeasureSpec spec_;
  int n_ = 0, cols_ = 0;
  double x_ = 0.0;
  std::vector<T> a_, b_, u_, w_, w2_;
};

// Flat-measure X-states: diagonal and anti-diagonal support only.
// Positivity makes the anti-diagonal entry c_ij lie in the disk (complex) or interval (real)
// of radius sqrt(l_i l_j); integrating it out leaves a Dirichlet law on the diagonal with
// weight 1 + beta/2 on paired entries and 1 on the unpaired centre (n = 9).
template <class T>
class XStateSampler {
 public:
  explicit XStateSampler(const MeasureSpec& spec) : spec_(spec) {
    spec.validate();
    n_ = static_cast<int>(spec.n());
    if (n_ != 4 && n_ != 6 && n_ != 9) throw InvalidSpec("X-states supported for n in {4, 6, 9}");
    if (spec.field == Field::H) throw InvalidSpec("quaternionic X-states unsupported");
    if ((spec.field == Field::R) != !detail::is_complex_v<T>) throw InvalidSpec("sampler scalar type does not match field");
    if (spec.family.kind != Family::hs && spec.family.kind != Family::induced)
      throw InvalidSpec("X-states support hs and induced families");
    k_ = spec.family.induced_k();
    if (k_ < 0) throw InvalidSpec("X-state induced weighting needs k >= 0");
    w_.assign(static_cast<std::size_t>(n_) * n_, T(0.0));
  }

  int n() const { return n_; }
  const T* w() const { return w_.data(); }

  template <class S>
  void draw(S& s) {
    for (;;) {
      s.begin_draw();
      draw_once(s);
      if (k_ == 0) return;
      double det = 1.0;
      for (int i = 0; i < n_ / 2; ++i) {
        int j = n_ - 1 - i;
        det *= detail::re(w_[i * n_ + i]) * detail::re(w_[j * n_ + j]) - detail::abs2(w_[i * n_ + j]);
      }
      if (n_ % 2) det *= detail::re(w_[(n_ / 2) * n_ + n_ / 2]);
      // det <= n^-n, so (det n^n)^k is a valid acceptance probability.
      double ratio = std::pow(det * std::pow(static_cast<double>(n_), n_), k_);
      if (s.next_uniform() < ratio) return;
    }
  }

 private:
  template <class S>
  double gamma_pair(S& s) {
    if constexpr (detail::is_complex_v<T>) {
      return -std::log(s.next_uniform() * s.next_uniform());
    } else {
      double z1 = s.next_normal(), z2 = s.next_normal(), z3 = s.next_normal();
      return 0.5 * (z1 * z1 + z2 * z2 + z3 * z3);
    }
  }

  template <class S>
  void draw_once(S& s) {
    double lam[max_order];
    double total = 0.0;
    for (int i = 0; i < n_; ++i) {
      bool centre = (n_ % 2 == 1) && i == n_ / 2;
      lam[i] = centre ? -std::log(s.next_uniform()) : gamma_pair(s);
      total += lam[i];
    }
    for (int i = 0; i < n_; ++i) lam[i] /= total;
    for (auto& x : w_) x = T(0.0);
    for (int i = 0; i < n_; ++i) w_[i * n_ + i] = lam[i];
    for (int i = 0; i < n_ / 2; ++i) {
      int j = n_ - 1 - i;
      double r = std::sqrt(lam[i] * lam[j]);
      T c;
      if constexpr (detail::is_complex_v<T>) {
        double rad = r * std::sqrt(s.next_uniform());
        double th = 6.283185307179586477 * s.next_uniform();
        c = T(rad * std::cos(th), rad * std::sin(th));
      } else {
        c = r * (2.0 * s.next_uniform() - 1.0);
      }
      w_[i * n_ + j] = c;
      w_[j * n_ + i] = detail::cj(c);
    }
  }

  MeasureSpec spec_;
  int n_ = 0;
  int k_ = 0;
  std::vector<T> w_;
};

template <class T>
inline DensityMatrix to_density(const T* w, int n, std::size_t m_a, std::size_t m_b) {
  DensityMatrix rho;
  rho.m_a = m_a;
  rho.m_b = m_b;
  rho.mat = ComplexMatrix(static_cast<std::size_t>(n));
  const double tr = detail::trace_re(w, n);
  for (int i = 0; i < n * n; ++i) rho.mat.entries[i] = cplx(w[i]) / tr;
  for (int i = 0; i < n; ++i) rho.mat.entries[i * n + i] = rho.mat.entries[i * n + i].real();
  return rho;
}

// i.i.d. standard normal entries over the field; quaternionic draws are returned embedded (2r x 2c).
template <class S>
GinibreMatrix ginibre(S& s, Field field, std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) throw InvalidSpec("ginibre needs rows, cols >= 1");
  GinibreMatrix g;
  if (field == Field::H) {
    g.rows = 2 * rows;
    g.cols = 2 * cols;
    g.entries.assign(g.rows * g.cols, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        double a = s.next_normal(), b = s.next_normal(), c = s.next_normal(), d = s.next_normal();
        cplx z1(a, b), z2(c, d);
        g(i, j) = z1;
        g(i, j + cols) = z2;
        g(i + rows, j) = -std::conj(z2);
        g(i + rows, j + cols) = std::conj(z1);
      }
    return g;
  }
  g.rows = rows;
  g.cols = cols;
  g.entries.resize(rows * cols);
  for (auto& e : g.entries) {
    double re = s.next_normal();
    e = field == Field::C ? cplx(re, s.next_normal()) : cplx(re, 0.0);
  }
  return g;
}

template <class S>
ComplexMatrix haar_unitary(S& s, std::size_t n) {
  std::vector<cplx> u(n * n);
  detail::haar_into(s, u.data(), static_cast<int>(n));
  ComplexMatrix m(n);
  m.entries = std::move(u);
  return m;
}

template <class S>
ComplexMatrix haar_orthogonal(S& s, std::size_t n) {
  std::vector<double> u(n * n);
  detail::haar_into(s, u.data(), static_cast<int>(n));
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n * n; ++i) m.entries[i] = u[i];
  return m;
}

template <class S>
DensityMatrix sample_density(S& s, const MeasureSpec& spec) {
  if (spec.field == Field::R) {
    DensitySampler<double> d(spec);
    d.draw(s);
    return to_density(d.w(), d.n(), spec.m_a, spec.m_b);
  }
  DensitySampler<cplx> d(spec);
  d.draw(s);
  return to_density(d.w(), d.n(), spec.m_a, spec.m_b);
}

template <class S>
DensityMatrix sample_x_state(S& s, const MeasureSpec& spec) {
  if (spec.field == Field::R) {
    XStateSampler<double> x(spec);
    x.draw(s);
    return to_density(x.w(), x.n(), spec.m_a, spec.m_b);
  }
  XStateSampler<cplx> x(spec);
  x.draw(s);
  return to_density(x.w(), x.n(), spec.m_a, spec.m_b);
}

}  // namespace seplab
