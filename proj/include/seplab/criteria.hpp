#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace seplab {

inline constexpr double positivity_tolerance = 1e-10;

struct Verdict {
  bool ppt = false;
  bool det_pt_greater = false;  // det(rho^PT) > det(rho), signed
  bool spectrum_separable = false;
  double min_pt_eigenvalue = std::numeric_limits<double>::quiet_NaN();  // NaN when not computed
  int negative_pt_count = -1;                                           // -1 when not computed
  bool det_sign_consistent = true;  // n = 4 only: ppt agrees with det(rho^PT) >= -1e-12
};

// Absolutely-separable test for 2 x m spectra: l1 < l(2m-1) + 2 sqrt(l(2m-2) l(2m)).
inline bool spectrum_separable_2xm(const Spectrum& spec, std::size_t m) {
  const auto& l = spec.eigenvalues;
  if (m < 1 || l.size() != 2 * m)
    throw DimensionMismatch("spectrum_separable_2xm: expected " + std::to_string(2 * m) + " eigenvalues");
  if (m == 1) return true;
  const std::size_t n = 2 * m;
  double prod = l[n - 3] * l[n - 1];
  return l[0] < l[n - 2] + 2.0 * std::sqrt(prod > 0.0 ? prod : 0.0);
}

inline bool has_qubit_factor(std::size_t m_a, std::size_t m_b) { return m_a == 2 || m_b == 2; }

inline Verdict classify(const DensityMatrix& rho) {
  Verdict v;
  ComplexMatrix pt = partial_transpose(rho, Subsystem::B);
  Spectrum pts = hermitian_eigenvalues(pt);
  v.min_pt_eigenvalue = pts.min();
  v.negative_pt_count = 0;
  for (double x : pts.eigenvalues) v.negative_pt_count += x < -positivity_tolerance;
  v.ppt = v.min_pt_eigenvalue >= -positivity_tolerance;
  const double det_pt = determinant(pt).real();
  const double det_rho = determinant(rho.mat).real();
  v.det_pt_greater = det_pt > det_rho;
  if (has_qubit_factor(rho.m_a, rho.m_b)) {
    v.spectrum_separable = spectrum_separable_2xm(hermitian_eigenvalues(rho.mat), rho.n() / 2);
  }
  if (rho.n() == 4) v.det_sign_consistent = v.ppt == (det_pt >= -1e-12);
  return v;
}

// Allocation-free classifier for unnormalized W (rho = W / tr W) used in the sampling loop.
// PPT is decided by a Cholesky factorization of W^PT + 1e-10 tr(W) I; determinants and the
// spectrum are evaluated only for PPT draws, where they are needed.
template <class T>
class FastClassifier {
 public:
  FastClassifier(int m_a, int m_b) : ma_(m_a), mb_(m_b), n_(m_a * m_b), pt_(n_ * n_), tmp_(n_ * n_) {
    if (n_ > max_order) throw DimensionMismatch("classifier order exceeds kernel limit");
  }

  Verdict operator()(const T* w) {
    Verdict v;
    detail::partial_transpose_into(w, pt_.data(), ma_, mb_, true);
    double tr = 0.0;
    for (int i = 0; i < n_; ++i) tr += detail::re(w[i * n_ + i]);
    tmp_ = pt_;
    const double shift = positivity_tolerance * tr;
    for (int i = 0; i < n_; ++i) tmp_[i * n_ + i] += shift;
    v.ppt = detail::cholesky_in_place(tmp_.data(), n_);
    if (!v.ppt) return v;
    tmp_ = pt_;
    const double det_pt = detail::re(detail::lu_determinant(tmp_.data(), n_));
    for (int i = 0; i < n_ * n_; ++i) tmp_[i] = w[i];
    const double det_w = detail::re(detail::lu_determinant(tmp_.data(), n_));
    v.det_pt_greater = det_pt > det_w;
    if (ma_ == 2 || mb_ == 2) {
      double ev[max_order];
      for (int i = 0; i < n_ * n_; ++i) tmp_[i] = w[i];
      detail::hermitian_eigvals(tmp_.data(), n_, ev);
      double prod = ev[n_ - 3] * ev[n_ - 1];
      v.spectrum_separable = ev[0] < ev[n_ - 2] + 2.0 * std::sqrt(prod > 0.0 ? prod : 0.0);
    }
    return v;
  }

 private:
  int ma_, mb_, n_;
  std::vector<T> pt_, tmp_;
};

}  // namespace seplab
