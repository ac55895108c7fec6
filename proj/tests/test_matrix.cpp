#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_complex.hpp>

#include <seplab/matrix.hpp>
#include <seplab/rng.hpp>

using namespace seplab;

namespace {

using BigComplex = boost::multiprecision::cpp_complex_50;

ComplexMatrix random_hermitian(CounterRng& rng, std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double re = to_normal(rng.uniform()), im = i == j ? 0.0 : to_normal(rng.uniform());
      m(i, j) = cplx(re, im);
      m(j, i) = cplx(re, -im);
    }
  return m;
}

ComplexMatrix random_density(CounterRng& rng, std::size_t n) {
  ComplexMatrix a(n);
  for (auto& x : a.entries) x = cplx(to_normal(rng.uniform()), to_normal(rng.uniform()));
  ComplexMatrix w = a * a.adjoint();
  cplx t = w.trace();
  for (auto& x : w.entries) x /= t.real();
  return w;
}

// det(lambda I - m) in 50-digit complex arithmetic.
double char_poly_sign(const ComplexMatrix& m, double lambda) {
  const int n = static_cast<int>(m.n);
  std::vector<BigComplex> a(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx v = -m(i, j);
      a[i * n + j] = BigComplex(v.real(), v.imag());
      if (i == j) a[i * n + j] += lambda;
    }
  BigComplex det = 1;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (abs(a[i * n + k]) > abs(a[piv * n + k])) piv = i;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      det = -det;
    }
    det *= a[k * n + k];
    for (int i = k + 1; i < n; ++i) {
      BigComplex f = a[i * n + k] / a[k * n + k];
      for (int j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return static_cast<double>(det.real());
}

}  // namespace

TEST(HermitianEigenvalues, IdentityOverFour) {
  auto s = hermitian_eigenvalues(ComplexMatrix::identity(4, 0.25));
  ASSERT_EQ(s.eigenvalues.size(), 4u);
  for (double x : s.eigenvalues) EXPECT_NEAR(x, 0.25, 1e-15);
}

TEST(HermitianEigenvalues, DiagonalSortedDescending) {
  auto s = hermitian_eigenvalues(ComplexMatrix::diagonal({0.2, 0.5, 0.0, 0.3}));
  std::vector<double> want{0.5, 0.3, 0.2, 0.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.eigenvalues[i], want[i], 1e-15);
}

TEST(HermitianEigenvalues, RejectsNonHermitian) {
  ComplexMatrix m(2);
  m(0, 1) = 1.0;
  EXPECT_THROW(hermitian_eigenvalues(m), NonHermitian);
}

TEST(HermitianEigenvalues, RejectsOversizedInput) {
  EXPECT_THROW(hermitian_eigenvalues(ComplexMatrix::identity(13)), DimensionMismatch);
}

TEST(HermitianEigenvalues, BracketedByCharacteristicPolynomialRoots) {
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 4 + trial % 7;
    ComplexMatrix m = random_hermitian(rng, n);
    auto s = hermitian_eigenvalues(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i + 1 < n) ASSERT_GE(s.eigenvalues[i], s.eigenvalues[i + 1]);
      sum += s.eigenvalues[i];
    }
    EXPECT_NEAR(sum, m.trace().real(), 1e-10);
    if (trial % 10) continue;  // the 50-digit determinant is slow; bracket a tenth of the cases
    for (std::size_t i = 0; i < n; ++i) {
      double lo = char_poly_sign(m, s.eigenvalues[i] - 1e-10);
      double hi = char_poly_sign(m, s.eigenvalues[i] + 1e-10);
      EXPECT_LT(lo * hi, 0.0) << "n=" << n << " eigenvalue " << i;
    }
  }
}

TEST(PartialTranspose, BellProjectorHasNegativeHalf) {
  ComplexMatrix bell(4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  auto s = hermitian_eigenvalues(partial_transpose(DensityMatrix{bell, 2, 2}));
  EXPECT_NEAR(s.min(), -0.5, 1e-14);
  EXPECT_NEAR(s.max(), 0.5, 1e-14);
}

TEST(PartialTranspose, ProductStateKeepsSpectrum) {
  ComplexMatrix a(2), b(3);
  a(0, 0) = 0.7;
  a(1, 1) = 0.3;
  a(0, 1) = cplx(0.1, 0.2);
  a(1, 0) = cplx(0.1, -0.2);
  b(0, 0) = 0.5;
  b(1, 1) = 0.3;
  b(2, 2) = 0.2;
  b(0, 2) = cplx(0.05, -0.1);
  b(2, 0) = cplx(0.05, 0.1);
  ComplexMatrix ab(6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) ab(i * 3 + k, j * 3 + l) = a(i, j) * b(k, l);
  auto s1 = hermitian_eigenvalues(ab);
  auto s2 = hermitian_eigenvalues(partial_transpose(DensityMatrix{ab, 2, 3}));
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(s1.eigenvalues[i], s2.eigenvalues[i], 1e-14);
}

TEST(PartialTranspose, InvolutionIsBitExact) {
  CounterRng rng(3, 1);
  ComplexMatrix m = random_density(rng, 6);
  for (auto sub : {Subsystem::A, Subsystem::B}) {
    EXPECT_EQ(partial_transpose(partial_transpose(m, 2, 3, sub), 2, 3, sub), m);
  }
}

TEST(PartialTranspose, PreservesTraceAndHermiticity) {
  CounterRng rng(4, 1);
  ComplexMatrix m = random_density(rng, 8);
  ComplexMatrix pt = partial_transpose(m, 2, 4);
  EXPECT_NEAR(pt.trace().real(), 1.0, 1e-12);
  EXPECT_TRUE(pt.is_hermitian());
}

TEST(PartialTranspose, DimensionMismatch) {
  EXPECT_THROW(partial_transpose(ComplexMatrix::identity(6), 2, 2), DimensionMismatch);
}

TEST(PartialTranspose, DeterminantSameOverEitherFactor) {
  CounterRng rng(5, 2);
  for (int t = 0; t < 200; ++t) {
    ComplexMatrix m = random_density(rng, 6);
    cplx da = determinant(partial_transpose(m, 2, 3, Subsystem::A));
    cplx db = determinant(partial_transpose(m, 2, 3, Subsystem::B));
    EXPECT_NEAR(da.real(), db.real(), 1e-10 * std::abs(db));
  }
}

TEST(Determinant, Examples) {
  EXPECT_NEAR(determinant(ComplexMatrix::identity(4, 0.25)).real(), 1.0 / 256, 1e-18);
  EXPECT_EQ(determinant(ComplexMatrix::diagonal({0.5, 0.5, 0.0, 0.0})), cplx(0.0));
}

TEST(Determinant, MatchesEigenvalueProduct) {
  CounterRng rng(6, 0);
  for (int t = 0; t < 200; ++t) {
    ComplexMatrix m = random_density(rng, 4 + t % 5);
    cplx d = determinant(m);
    double prod = 1.0;
    for (double x : hermitian_eigenvalues(m).eigenvalues) prod *= x;
    EXPECT_NEAR(d.real(), prod, 1e-10 * std::fabs(prod));
    EXPECT_LE(std::fabs(d.imag()), 1e-12 * std::abs(d));
  }
}

TEST(QuaternionEmbed, IdentityEmbedsToIdentity) {
  QuaternionMatrix q(3);
  for (int i = 0; i < 3; ++i) q.a[i * 3 + i] = 1.0;
  EXPECT_EQ(quaternion_embed(q), ComplexMatrix::identity(6));
}

TEST(QuaternionEmbed, PureJEntryGivesConjugatePair) {
  // A lone j unit is anti-Hermitian: its 2x2 block [[0,1],[-1,0]] has eigenvalues +i and -i.
  QuaternionMatrix q(2);
  q.c[1 * 2 + 1] = 1.0;
  ComplexMatrix e = quaternion_embed(q);
  EXPECT_EQ(e(1, 3), cplx(1.0));
  EXPECT_EQ(e(3, 1), cplx(-1.0));
  ComplexMatrix herm = e;  // i times the block is Hermitian with eigenvalues +1 and -1
  for (auto& x : herm.entries) x *= cplx(0.0, 1.0);
  auto s = hermitian_eigenvalues(herm);
  EXPECT_NEAR(s.eigenvalues.front(), 1.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues.back(), -1.0, 1e-15);
}

TEST(QuaternionEmbed, HermitianQuaternionHasDoubledSpectrum) {
  CounterRng rng(7, 0);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + t % 4;
    QuaternionMatrix q(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        double a = to_normal(rng.uniform());
        double b = i == j ? 0.0 : to_normal(rng.uniform());
        double c = i == j ? 0.0 : to_normal(rng.uniform());
        double d = i == j ? 0.0 : to_normal(rng.uniform());
        q.a[i * n + j] = a, q.b[i * n + j] = b, q.c[i * n + j] = c, q.d[i * n + j] = d;
        q.a[j * n + i] = a, q.b[j * n + i] = -b, q.c[j * n + i] = -c, q.d[j * n + i] = -d;
      }
    auto s = hermitian_eigenvalues(quaternion_embed(q));
    for (std::size_t i = 0; i < 2 * n; i += 2) EXPECT_NEAR(s.eigenvalues[i], s.eigenvalues[i + 1], 1e-9);
  }
}

TEST(QuaternionEmbed, RejectsRaggedBlocks) {
  QuaternionMatrix q(2);
  q.d.pop_back();
  EXPECT_THROW(quaternion_embed(q), DimensionMismatch);
}
