// From chi polynomials to exact probabilities, checked against quadrature.
#include <cstdio>

#include <seplab/seplab.hpp>

using namespace seplab;

int main() {
  std::printf("%3s %3s %28s %20s %10s\n", "d", "k", "exact", "quadrature", "|diff|");
  for (int a = 1; a <= 3; ++a) {
    for (int k = 0; k <= 3; ++k) {
      Rational p = sep_prob_exact(a, k);
      double q = sep_prob_quadrature(chi_general(a, k), ExponentRule::Induced(k));
      std::printf("%3d %3d %28s %20.15f %10.2e\n", 2 * a, k, to_string(p).c_str(), q, std::abs(q - to_double(p)));
    }
  }
  std::printf("\nsquare-root rule, d=2 k=0: %.12f\n", sep_prob_quadrature(chi_general(1, 0), ExponentRule::OpMonotoneSqrt(0)));
}
