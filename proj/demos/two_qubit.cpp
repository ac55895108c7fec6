// Draw two-qubit states from a few measures and compare the PPT rate with the registry.
#include <cmath>
#include <cstdio>

#include <seplab/seplab.hpp>

using namespace seplab;

int main() {
  const Family families[] = {Family::HS(), Family::Induced(1), Family::Bures()};
  for (Field f : {Field::C, Field::R}) {
    for (const Family& fam : families) {
      RunOptions opt;
      opt.spec = MeasureSpec{f, 2, 2, fam};
      opt.samples = 400000;
      opt.seed = 7;
      EstimatorState st = run_estimate(opt);
      auto ci = st.ci();
      std::printf("%s 2x2 %-10s p_hat %.5f  [%.5f, %.5f]", to_string(f), fam.name().c_str(), st.p_hat(), ci.lo, ci.hi);
      if (auto rec = lookup(f, 2, 2, fam)) std::printf("  registry %s = %.5f", rec->value.to_string().c_str(), rec->numeric());
      std::printf("\n");
    }
  }
}
