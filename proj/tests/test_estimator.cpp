#include <gtest/gtest.h>

#include <sstream>

#include <seplab/experiment.hpp>
#include <seplab/rng.hpp>

using namespace seplab;

namespace {

Verdict verdict(bool ppt, bool det_greater = false, bool spectrum = false) {
  Verdict v;
  v.ppt = ppt;
  v.det_pt_greater = det_greater;
  v.spectrum_separable = spectrum;
  return v;
}

EstimatorState random_state(CounterRng& rng, std::uint64_t n) {
  EstimatorState s;
  for (std::uint64_t i = 0; i < n; ++i) {
    bool ppt = rng.uniform() < 0.3;
    update(s, verdict(ppt, ppt && rng.uniform() < 0.5, ppt && rng.uniform() < 0.1));
  }
  return s;
}

}  // namespace

TEST(Wilson, LargeSampleIntervals) {
  auto a = wilson_ci(78293301, 2900000000ULL);
  EXPECT_NEAR(a.lo, 0.0269918, 5e-8);
  EXPECT_NEAR(a.hi, 0.0270036, 5e-8);
  auto b = wilson_ci(462704503, 3530000000ULL);
  EXPECT_NEAR(b.lo, 0.131067, 5e-7);
  EXPECT_NEAR(b.hi, 0.131089, 5e-7);
}

TEST(Wilson, ZeroHits) {
  auto ci = wilson_ci(0, 100);
  EXPECT_EQ(ci.lo, 0.0);
  EXPECT_NEAR(ci.hi, 0.0370, 5e-5);
}

TEST(Wilson, AllHits) {
  auto ci = wilson_ci(100000, 100000);
  EXPECT_EQ(ci.hi, 1.0);
  EXPECT_LT(ci.lo, 1.0);
}

TEST(Wilson, Errors) {
  EXPECT_THROW(wilson_ci(0, 0), DomainError);
  EXPECT_THROW(wilson_ci(1, 10, 1.0), DomainError);
}

TEST(Wilson, Coverage) {
  const double p = 8.0 / 33;
  CounterRng rng(123, 0);
  int covered = 0;
  for (int e = 0; e < 1000; ++e) {
    std::uint64_t hits = 0;
    for (int i = 0; i < 10000; ++i) hits += rng.uniform() < p;
    auto ci = wilson_ci(hits, 10000);
    covered += ci.lo <= p && p <= ci.hi;
  }
  EXPECT_GE(covered, 940);
  EXPECT_LE(covered, 965);
}

TEST(Update, CountsFlags) {
  EstimatorState s;
  update(s, verdict(true, true));
  EXPECT_EQ(s.trials, 1u);
  EXPECT_EQ(s.hits, 1u);
  EXPECT_EQ(s.det_greater_hits, 1u);
  update(s, verdict(false, true, true));  // flags of entangled draws are ignored
  EXPECT_EQ(s.trials, 2u);
  EXPECT_EQ(s.hits, 1u);
  EXPECT_EQ(s.det_greater_hits, 1u);
  EXPECT_EQ(s.spectrum_hits, 0u);
}

TEST(Update, AllSeparable) {
  EstimatorState s;
  for (int i = 0; i < 100000; ++i) update(s, verdict(true));
  EXPECT_EQ(s.p_hat(), 1.0);
  EXPECT_EQ(s.ci().hi, 1.0);
}

TEST(Update, TraceCheckpoints) {
  EstimatorState s;
  s.stride = 1000;
  CounterRng rng(1, 0);
  for (int i = 0; i < 10500; ++i) update(s, verdict(rng.uniform() < 0.5));
  ASSERT_EQ(s.trace.size(), 10u);
  for (std::size_t i = 0; i < s.trace.size(); ++i) {
    EXPECT_EQ(s.trace[i].trials, 1000 * (i + 1));
    if (i) EXPECT_GE(s.trace[i].hits, s.trace[i - 1].hits);
  }
}

TEST(Merge, MatchesSingleRun) {
  CounterRng a(9, 0), b(9, 0);
  EstimatorState whole = random_state(a, 2000000);
  EstimatorState first = random_state(b, 1000000), second = random_state(b, 1000000);
  EXPECT_TRUE(merge(first, second).counters_equal(whole));
}

TEST(Merge, AssociativeAndCommutative) {
  CounterRng rng(10, 0);
  for (int t = 0; t < 50; ++t) {
    EstimatorState x = random_state(rng, 1 + t * 37), y = random_state(rng, 500), z = random_state(rng, 3 + t);
    EXPECT_TRUE(merge(merge(x, y), z).counters_equal(merge(x, merge(y, z))));
    EXPECT_TRUE(merge(x, y).counters_equal(merge(y, x)));
  }
}

TEST(Merge, ShiftsTraceOfSecondState) {
  EstimatorState a, b;
  a.stride = b.stride = 10;
  for (int i = 0; i < 20; ++i) update(a, verdict(true));
  for (int i = 0; i < 10; ++i) update(b, verdict(false));
  EstimatorState m = merge(a, b);
  ASSERT_EQ(m.trace.size(), 3u);
  EXPECT_EQ(m.trace[2], (TracePoint{30, 20}));
}

TEST(TraceCsv, HeaderAndRows) {
  std::ostringstream os;
  write_trace_csv(os, {{100, 25}, {200, 48}});
  std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "trials,hits,p_hat,ci_lo,ci_hi");
  EXPECT_NE(s.find("\n100,25,0.25,"), std::string::npos);
  EXPECT_NE(s.find("\n200,48,0.24,"), std::string::npos);
}

TEST(CorrectedBures, UnitFactorLeavesEstimate) {
  EXPECT_DOUBLE_EQ(corrected_bures(0.0733, 8.0 / 33, 8.0 / 33), 0.0733);
}

TEST(CorrectedBures, AveragesCorrectionFactor) {
  // A correction factor of 1.00002224983 moves 0.0733181043 to 0.07331891996.
  const double hs_hat = (8.0 / 33) / 1.00002224983;
  EXPECT_NEAR(corrected_bures(0.0733181043, hs_hat, 8.0 / 33), 0.07331891996, 1e-11);
}

TEST(CorrectedBures, CoupledCounts) {
  CoupledState c;
  c.trials = 4372000000ULL;
  c.hs_hits = 1059902370ULL;
  c.bures_hits = 320546752ULL;
  EXPECT_NEAR(c.bures_hat(), 0.0733181043, 1e-10);
  // The HS rate exceeds 8/33, so the Bures estimate is pulled down.
  EXPECT_NEAR(corrected_bures(c, 8.0 / 33), 0.0733172887, 1e-10);
}

TEST(CorrectedBures, NoHsHits) {
  CoupledState c;
  c.update(false, true);
  EXPECT_THROW(corrected_bures(c, 8.0 / 33), DivisionByZero);
}

TEST(Runner, ThreadCountDoesNotChangeResult) {
  RunOptions opt;
  opt.spec = MeasureSpec{Field::C, 2, 2, Family::HS()};
  opt.samples = 350000;
  opt.stride = 100000;
  opt.threads = 1;
  EstimatorState one = run_estimate(opt);
  opt.threads = 3;
  EstimatorState three = run_estimate(opt);
  EXPECT_TRUE(one.counters_equal(three));
  EXPECT_EQ(one.trace, three.trace);
  ASSERT_EQ(one.trace.size(), 4u);
  EXPECT_EQ(one.trace.back().trials, 350000u);
  EXPECT_NEAR(one.p_hat(), 8.0 / 33, 5 * std::sqrt(0.25 / 350000));
}

TEST(Runner, QuasiResultIndependentOfChunking) {
  RunOptions opt;
  opt.spec = MeasureSpec{Field::R, 2, 2, Family::HS()};
  opt.stream = StreamKind::quasi;
  opt.samples = 400000;
  opt.stride = 100000;
  EstimatorState a = run_estimate(opt);
  opt.stride = 400000;
  opt.threads = 2;
  EstimatorState b = run_estimate(opt);
  EXPECT_TRUE(a.counters_equal(b));
  EXPECT_NEAR(a.p_hat(), 29.0 / 64, 2e-3);
}

TEST(Runner, XStatesAndInvalidConfigs) {
  RunOptions opt;
  opt.spec = MeasureSpec{Field::C, 2, 2, Family::HS()};
  opt.x_states = true;
  opt.samples = 200000;
  EXPECT_NEAR(run_estimate(opt).p_hat(), 0.4, 5 * std::sqrt(0.24 / 200000));
  opt.stream = StreamKind::quasi;
  EXPECT_THROW(run_estimate(opt), InvalidConfig);
  opt.stream = StreamKind::pseudo;
  opt.samples = 0;
  EXPECT_THROW(run_estimate(opt), InvalidConfig);
}

TEST(Runner, CoupledRunSharesDraws) {
  RunOptions opt;
  opt.spec = MeasureSpec{Field::C, 2, 2, Family::HS()};
  opt.samples = 200000;
  CoupledState c = run_coupled(opt);
  EXPECT_EQ(c.trials, 200000u);
  EXPECT_NEAR(c.hs_hat(), 8.0 / 33, 5 * std::sqrt(0.19 / 200000));
  EXPECT_NEAR(c.bures_hat(), 0.0733, 5 * std::sqrt(0.07 / 200000));
}

TEST(Runner, NormalsPerDraw) {
  EXPECT_EQ(normals_per_draw(MeasureSpec{Field::C, 2, 2, Family::HS()}), 32);
  EXPECT_EQ(normals_per_draw(MeasureSpec{Field::C, 2, 2, Family::Bures()}), 64);
  EXPECT_EQ(normals_per_draw(MeasureSpec{Field::R, 2, 2, Family::Bures()}), 36);
  EXPECT_EQ(normals_per_draw(MeasureSpec{Field::C, 2, 3, Family::HS()}), 72);
}
