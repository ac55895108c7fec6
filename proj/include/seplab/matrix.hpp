#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace seplab {

using cplx = std::complex<double>;

// Largest matrix order handled by the fixed-size kernels.
inline constexpr int max_order = 12;

namespace detail {

inline double cj(double x) { return x; }
inline cplx cj(const cplx& x) { return std::conj(x); }
inline double re(double x) { return x; }
inline double re(const cplx& x) { return x.real(); }
inline double abs2(double x) { return x * x; }
inline double abs2(const cplx& x) { return x.real() * x.real() + x.imag() * x.imag(); }

// Eigenvalues of a symmetric tridiagonal matrix (implicit-shift QL).
// d: diagonal (n), e: off-diagonal with e[i] coupling i and i+1; e[n-1] is scratch.
inline void tridiagonal_ql(double* d, double* e, int n) {
  if (n <= 1) return;
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw NonConvergence("tridiagonal QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// Eigenvalues (descending) of a Hermitian matrix stored row-major in a (destroyed).
template <class T>
void hermitian_eigvals(T* a, int n, double* w) {
  double d[max_order], e[max_order];
  T v[max_order], p[max_order];
  for (int k = 0; k + 2 < n; ++k) {
    double alpha2 = 0.0;
    for (int i = k + 1; i < n; ++i) alpha2 += abs2(a[i * n + k]);
    double alpha = std::sqrt(alpha2);
    if (alpha == 0.0) {
      e[k] = 0.0;
      continue;
    }
    T x0 = a[(k + 1) * n + k];
    double ax0 = std::sqrt(abs2(x0));
    T ph = ax0 > 0.0 ? x0 / ax0 : T(1.0);
    for (int i = k + 1; i < n; ++i) v[i] = a[i * n + k];
    v[k + 1] += ph * alpha;
    double tau = 1.0 / (alpha * (alpha + ax0));
    T kdot = T(0.0);
    for (int i = k + 1; i < n; ++i) {
      T s = T(0.0);
      for (int j = k + 1; j < n; ++j) s += a[i * n + j] * v[j];
      p[i] = tau * s;
      kdot += cj(v[i]) * p[i];
    }
    double kk = 0.5 * tau * re(kdot);
    for (int i = k + 1; i < n; ++i) p[i] -= kk * v[i];
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[i * n + j] -= v[i] * cj(p[j]) + p[i] * cj(v[j]);
    e[k] = alpha;
  }
  for (int i = 0; i < n; ++i) d[i] = re(a[i * n + i]);
  if (n >= 2) e[n - 2] = std::sqrt(abs2(a[(n - 1) * n + n - 2]));
  tridiagonal_ql(d, e, n);
  std::sort(d, d + n, [](double x, double y) { return x > y; });
  for (int i = 0; i < n; ++i) w[i] = d[i];
}

// In-place Cholesky on the lower triangle; false when a pivot is not positive.
template <class T>
bool cholesky_in_place(T* a, int n) {
  for (int j = 0; j < n; ++j) {
    double s = re(a[j * n + j]);
    for (int k = 0; k < j; ++k) s -= abs2(a[j * n + k]);
    if (!(s > 0.0)) return false;
    double ljj = std::sqrt(s);
    a[j * n + j] = ljj;
    double inv = 1.0 / ljj;
    for (int i = j + 1; i < n; ++i) {
      T t = a[i * n + j];
      for (int k = 0; k < j; ++k) t -= a[i * n + k] * cj(a[j * n + k]);
      a[i * n + j] = t * inv;
    }
  }
  return true;
}

// Determinant by LU with partial pivoting; a is destroyed.
template <class T>
T lu_determinant(T* a, int n) {
  T det = T(1.0);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = abs2(a[k * n + k]);
    for (int i = k + 1; i < n; ++i) {
      double v = abs2(a[i * n + k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return T(0.0);
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      det = -det;
    }
    T pk = a[k * n + k];
    det *= pk;
    for (int i = k + 1; i < n; ++i) {
      T f = a[i * n + k] / pk;
      if (f == T(0.0)) continue;
      for (int j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return det;
}

// out(i,j) = in with the second (B) or first (A) tensor factor transposed.
template <class T>
void partial_transpose_into(const T* in, T* out, int ma, int mb, bool on_b) {
  const int n = ma * mb;
  for (int a = 0; a < ma; ++a)
    for (int b = 0; b < mb; ++b)
      for (int a2 = 0; a2 < ma; ++a2)
        for (int b2 = 0; b2 < mb; ++b2) {
          int src = on_b ? (a * mb + b2) * n + (a2 * mb + b) : (a2 * mb + b) * n + (a * mb + b2);
          out[(a * mb + b) * n + (a2 * mb + b2)] = in[src];
        }
}

}  // namespace detail

struct ComplexMatrix {
  std::size_t n = 0;
  std::vector<cplx> entries;  // row-major, n*n

  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : n(dim), entries(dim * dim, cplx(0.0, 0.0)) {}

  static ComplexMatrix identity(std::size_t dim, double scale = 1.0) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = scale;
    return m;
  }
  static ComplexMatrix diagonal(const std::vector<double>& d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  cplx& operator()(std::size_t i, std::size_t j) { return entries[i * n + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& x : entries) m = std::max(m, std::abs(x));
    return m;
  }
  double hermitian_defect() const {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
  }
  bool is_hermitian(double rel_tol = 1e-12) const { return hermitian_defect() <= rel_tol * max_abs(); }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }
  friend ComplexMatrix operator*(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.n != y.n) throw DimensionMismatch("matrix product of orders " + std::to_string(x.n) + " and " + std::to_string(y.n));
    ComplexMatrix r(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
      for (std::size_t k = 0; k < x.n; ++k) {
        cplx xik = x(i, k);
        for (std::size_t j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
      }
    return r;
  }
  bool operator==(const ComplexMatrix&) const = default;
};

struct DensityMatrix {
  ComplexMatrix mat;
  std::size_t m_a = 0;
  std::size_t m_b = 0;

  std::size_t n() const { return mat.n; }
};

// Eigenvalues sorted descending.
struct Spectrum {
  std::vector<double> eigenvalues;

  double sum() const {
    double s = 0.0;
    for (double x : eigenvalues) s += x;
    return s;
  }
  double min() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
  double max() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
};

enum class Subsystem { A, B };

inline Spectrum hermitian_eigenvalues(const ComplexMatrix& m) {
  if (m.n == 0) return {};
  if (m.n > static_cast<std::size_t>(max_order))
    throw DimensionMismatch("eigensolver supports order <= " + std::to_string(max_order));
  if (!m.is_hermitian()) throw NonHermitian("hermitian_eigenvalues: defect " + std::to_string(m.hermitian_defect()));
  std::vector<cplx> work = m.entries;
  Spectrum s;
  s.eigenvalues.resize(m.n);
  detail::hermitian_eigvals(work.data(), static_cast<int>(m.n), s.eigenvalues.data());
  return s;
}

inline ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t m_a, std::size_t m_b,
                                       Subsystem sub = Subsystem::B) {
  if (m_a * m_b != m.n || m_a == 0)
    throw DimensionMismatch("partial_transpose: " + std::to_string(m_a) + "x" + std::to_string(m_b) +
                            " does not factor order " + std::to_string(m.n));
  ComplexMatrix r(m.n);
  detail::partial_transpose_into(m.entries.data(), r.entries.data(), static_cast<int>(m_a), static_cast<int>(m_b),
                                 sub == Subsystem::B);
  return r;
}

inline ComplexMatrix partial_transpose(const DensityMatrix& rho, Subsystem sub = Subsystem::B) {
  return partial_transpose(rho.mat, rho.m_a, rho.m_b, sub);
}

inline cplx determinant(const ComplexMatrix& m) {
  std::vector<cplx> work = m.entries;
  return detail::lu_determinant(work.data(), static_cast<int>(m.n));
}

// Quaternionic N x N matrix q = a + b i + c j + d k as four real blocks.
struct QuaternionMatrix {
  std::size_t n = 0;
  std::vector<double> a, b, c, d;  // row-major, n*n each

  QuaternionMatrix() = default;
  explicit QuaternionMatrix(std::size_t dim)
      : n(dim), a(dim * dim, 0.0), b(dim * dim, 0.0), c(dim * dim, 0.0), d(dim * dim, 0.0) {}
};

// Writing q = z1 + z2 j with z1 = a + b i, z2 = c + d i, the embedding is [[Z1, Z2], [-conj Z2, conj Z1]].
inline ComplexMatrix quaternion_embed(const QuaternionMatrix& q) {
  const std::size_t n = q.n;
  if (q.a.size() != n * n || q.b.size() != n * n || q.c.size() != n * n || q.d.size() != n * n)
    throw DimensionMismatch("quaternion_embed: blocks differ in size");
  ComplexMatrix r(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t k = i * n + j;
      cplx z1(q.a[k], q.b[k]), z2(q.c[k], q.d[k]);
      r(i, j) = z1;
      r(i, j + n) = z2;
      r(i + n, j) = -std::conj(z2);
      r(i + n, j + n) = std::conj(z1);
    }
  return r;
}

}  // namespace seplab
