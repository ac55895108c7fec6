#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <seplab/criteria.hpp>
#include <seplab/ensembles.hpp>
#include <seplab/stream.hpp>

using namespace seplab;

namespace {

double four_sigma(double p, double n) { return 4.0 * std::sqrt(p * (1.0 - p) / n); }

void expect_valid_density(const DensityMatrix& rho) {
  EXPECT_NEAR(rho.mat.trace().real(), 1.0, 1e-12);
  EXPECT_EQ(rho.mat.trace().imag(), 0.0);
  EXPECT_TRUE(rho.mat.is_hermitian());
  auto s = hermitian_eigenvalues(rho.mat);
  EXPECT_GE(s.min(), -1e-10);
  EXPECT_NEAR(s.sum(), 1.0, 1e-10);
}

double ppt_fraction(const MeasureSpec& spec, int samples, bool x_states, std::uint64_t seed) {
  PseudoStream s(seed, 0);
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    DensityMatrix rho = x_states ? sample_x_state(s, spec) : sample_density(s, spec);
    hits += classify(rho).ppt;
  }
  return static_cast<double>(hits) / samples;
}

}  // namespace

TEST(Ginibre, RealDrawIsReproducible) {
  PseudoStream a(42, 0), b(42, 0);
  auto g1 = ginibre(a, Field::R, 2, 2);
  auto g2 = ginibre(b, Field::R, 2, 2);
  EXPECT_EQ(g1.entries, g2.entries);
  EXPECT_EQ(a.rng().counter(), 4u);
  for (const auto& z : g1.entries) EXPECT_EQ(z.imag(), 0.0);
}

TEST(Ginibre, ComplexEntryMoments) {
  PseudoStream s(1, 0);
  double mean_re = 0.0, mean_abs2 = 0.0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    cplx z = ginibre(s, Field::C, 1, 1)(0, 0);
    mean_re += z.real();
    mean_abs2 += std::norm(z);
  }
  EXPECT_NEAR(mean_re / draws, 0.0, 0.005);
  EXPECT_NEAR(mean_abs2 / draws, 2.0, 0.01);
}

TEST(Ginibre, QuaternionicIsEmbedded) {
  PseudoStream s(2, 0);
  auto g = ginibre(s, Field::H, 2, 3);
  ASSERT_EQ(g.rows, 4u);
  ASSERT_EQ(g.cols, 6u);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(g(i + 2, j + 3), std::conj(g(i, j)));
      EXPECT_EQ(g(i + 2, j), -std::conj(g(i, j + 3)));
    }
}

TEST(Ginibre, QuasiStreamExhausts) {
  QuasiStream q(QrState(3, 0.5));
  q.begin_draw();
  EXPECT_THROW(ginibre(q, Field::C, 2, 2), StreamExhausted);
}

TEST(Ginibre, RejectsEmptyShape) {
  PseudoStream s(1, 0);
  EXPECT_THROW(ginibre(s, Field::C, 0, 2), InvalidSpec);
}

TEST(SampleDensity, AllFamiliesGiveValidStates) {
  PseudoStream s(3, 0);
  for (Field f : {Field::R, Field::C})
    for (auto [ma, mb] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}, std::pair{2, 5}})
      for (Family fam : {Family::HS(), Family::Induced(1), Family::Induced(-1), Family::Bures(), Family::Interpolated(0.3)})
        for (int i = 0; i < 20; ++i) expect_valid_density(sample_density(s, MeasureSpec{f, std::size_t(ma), std::size_t(mb), fam}));
}

TEST(SampleDensity, InterpolatedZeroIsHilbertSchmidtBitExact) {
  for (Field f : {Field::R, Field::C}) {
    PseudoStream a(9, 1), b(9, 1);
    for (int i = 0; i < 100; ++i) {
      auto r1 = sample_density(a, MeasureSpec{f, 2, 2, Family::Interpolated(0.0)});
      auto r2 = sample_density(b, MeasureSpec{f, 2, 2, Family::HS()});
      EXPECT_EQ(r1.mat, r2.mat);
    }
  }
}

TEST(SampleDensity, InducedZeroIsHilbertSchmidtBitExact) {
  PseudoStream a(10, 0), b(10, 0);
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(sample_density(a, MeasureSpec{Field::C, 2, 3, Family::Induced(0)}).mat,
              sample_density(b, MeasureSpec{Field::C, 2, 3, Family::HS()}).mat);
}

TEST(SampleDensity, InvalidSpecs) {
  PseudoStream s(1, 0);
  EXPECT_THROW(sample_density(s, MeasureSpec{Field::H, 2, 2, Family::HS()}), InvalidSpec);
  EXPECT_THROW(sample_density(s, MeasureSpec{Field::C, 2, 2, Family::Induced(-4)}), InvalidSpec);
  EXPECT_THROW(sample_density(s, MeasureSpec{Field::C, 4, 4, Family::HS()}), InvalidSpec);
  EXPECT_THROW(sample_density(s, MeasureSpec{Field::C, 2, 2, Family::Interpolated(1.5)}), InvalidSpec);
}

TEST(SampleDensity, GinibreShapes) {
  EXPECT_EQ((MeasureSpec{Field::C, 2, 2, Family::HS()}.ginibre_cols()), 4u);
  EXPECT_EQ((MeasureSpec{Field::C, 2, 3, Family::Induced(-2)}.ginibre_cols()), 4u);
  EXPECT_EQ((MeasureSpec{Field::R, 2, 2, Family::HS()}.ginibre_cols()), 5u);
  DensitySampler<double> real_bures(MeasureSpec{Field::R, 2, 2, Family::Bures()});
  EXPECT_EQ(real_bures.cols(), 5);
  DensitySampler<cplx> complex_bures(MeasureSpec{Field::C, 2, 2, Family::Bures()});
  EXPECT_EQ(complex_bures.cols(), 4);
}

TEST(SampleDensity, TwoQubitHilbertSchmidtPpt) {
  const int n = 1000000;
  EXPECT_NEAR(ppt_fraction(MeasureSpec{Field::C, 2, 2, Family::HS()}, n, false, 21), 8.0 / 33, four_sigma(8.0 / 33, n));
}

TEST(SampleDensity, TwoRebitHilbertSchmidtPpt) {
  const int n = 1000000;
  EXPECT_NEAR(ppt_fraction(MeasureSpec{Field::R, 2, 2, Family::HS()}, n, false, 22), 29.0 / 64, four_sigma(29.0 / 64, n));
}

TEST(SampleDensity, TwoQubitBuresPpt) {
  const int n = 1000000;
  EXPECT_NEAR(ppt_fraction(MeasureSpec{Field::C, 2, 2, Family::Bures()}, n, false, 23), 0.07331, 0.001);
}

TEST(SampleDensity, MeanDeterminantOfTwoQubitStates) {
  // rho = W / tr W is independent of tr W ~ Gamma(16), so E det rho = E det W / E (tr W)^4 = 4! 15! / 19!.
  const double want = 1.0 / 3876.0;
  PseudoStream s(24, 0);
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = determinant(sample_density(s, MeasureSpec{Field::C, 2, 2, Family::HS()}).mat).real();
    sum += d;
    sum2 += d * d;
  }
  double mean = sum / n, sd = std::sqrt(sum2 / n - mean * mean);
  EXPECT_NEAR(mean, want, 3.0 * sd / std::sqrt(n));
}

TEST(HaarUnitary, IsUnitary) {
  PseudoStream s(30, 0);
  for (std::size_t n : {1u, 2u, 4u, 9u}) {
    ComplexMatrix u = haar_unitary(s, n);
    ComplexMatrix p = u.adjoint() * u;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(std::abs(p(i, j) - (i == j ? 1.0 : 0.0)), 0.0, 1e-12);
    ComplexMatrix o = haar_orthogonal(s, n);
    ComplexMatrix q = o.adjoint() * o;
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(q(i, i).real(), 1.0, 1e-12);
  }
}

TEST(HaarUnitary, SecondMoment) {
  PseudoStream s(31, 0);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += std::norm(haar_unitary(s, 4)(0, 0));
  EXPECT_NEAR(sum / n, 0.25, 0.001);
}

TEST(HaarUnitary, EigenphasesUniform) {
  // 2 x 2: eigenvalues solve l^2 - tr l + det = 0. Pair repulsion only tightens the KS statistic.
  PseudoStream s(32, 0);
  const int draws = 100000;
  std::vector<double> phases;
  phases.reserve(2 * draws);
  for (int i = 0; i < draws; ++i) {
    ComplexMatrix u = haar_unitary(s, 2);
    cplx tr = u.trace(), det = determinant(u);
    cplx root = std::sqrt(tr * tr - 4.0 * det);
    for (cplx l : {(tr + root) / 2.0, (tr - root) / 2.0})
      phases.push_back((std::arg(l) + std::numbers::pi) / (2 * std::numbers::pi));
  }
  std::sort(phases.begin(), phases.end());
  double ks = 0.0;
  const double m = static_cast<double>(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i)
    ks = std::max({ks, std::fabs((i + 1) / m - phases[i]), std::fabs(phases[i] - i / m)});
  EXPECT_LT(ks, 1.36 / std::sqrt(m));
}

TEST(XStates, SupportIsDiagonalAndAntiDiagonal) {
  PseudoStream s(40, 0);
  for (Field f : {Field::R, Field::C})
    for (auto [ma, mb] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
      MeasureSpec spec{f, std::size_t(ma), std::size_t(mb), Family::HS()};
      for (int t = 0; t < 50; ++t) {
        auto rho = sample_x_state(s, spec);
        expect_valid_density(rho);
        const std::size_t n = rho.n();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (i != j && i + j != n - 1) EXPECT_EQ(rho.mat(i, j), cplx(0.0));
      }
    }
}

TEST(XStates, UnsupportedDimensions) {
  PseudoStream s(1, 0);
  EXPECT_THROW(sample_x_state(s, MeasureSpec{Field::C, 2, 4, Family::HS()}), InvalidSpec);
  EXPECT_THROW(sample_x_state(s, MeasureSpec{Field::C, 2, 2, Family::Bures()}), InvalidSpec);
}

TEST(XStates, TwoQubitPpt) {
  const int n = 1000000;
  EXPECT_NEAR(ppt_fraction(MeasureSpec{Field::C, 2, 2, Family::HS()}, n, true, 41), 0.4, four_sigma(0.4, n));
}

TEST(XStates, RealFamilyAgreesAcrossDimensions) {
  const int n = 500000;
  const double p = 16.0 / (3.0 * std::numbers::pi * std::numbers::pi);
  double two_rebit = ppt_fraction(MeasureSpec{Field::R, 2, 2, Family::HS()}, n, true, 42);
  double rebit_retrit = ppt_fraction(MeasureSpec{Field::R, 2, 3, Family::HS()}, n, true, 43);
  EXPECT_NEAR(two_rebit, p, four_sigma(p, n));
  EXPECT_NEAR(rebit_retrit, p, four_sigma(p, n));
  EXPECT_LT(std::fabs(two_rebit - rebit_retrit), 8.0 * std::sqrt(p * (1 - p) / n));
}

TEST(XStates, QubitQutritHasAtMostOneNegativePtEigenvalue) {
  PseudoStream s(44, 0);
  for (int t = 0; t < 100000; ++t) {
    auto v = classify(sample_x_state(s, MeasureSpec{Field::C, 2, 3, Family::HS()}));
    ASSERT_LE(v.negative_pt_count, 1);
  }
}
