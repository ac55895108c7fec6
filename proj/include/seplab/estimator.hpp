#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "criteria.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace seplab {

struct TracePoint {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  bool operator==(const TracePoint&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval for hits successes out of trials.
inline Interval wilson_ci(std::uint64_t hits, std::uint64_t trials, double level = 0.95) {
  if (trials == 0) throw DomainError("wilson_ci needs at least one trial");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  const double z = to_normal(0.5 + 0.5 * level);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2n = z * z / n;
  const double centre = (p + 0.5 * z2n) / (1.0 + z2n);
  const double half = z / (1.0 + z2n) * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
  Interval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (hits == 0) ci.lo = 0.0;
  if (hits == trials) ci.hi = 1.0;
  return ci;
}

// Mergeable Monte Carlo counters. det_greater_hits counts det(rho^PT) > det(rho) among PPT draws.
struct EstimatorState {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  std::uint64_t det_greater_hits = 0;
  std::uint64_t spectrum_hits = 0;
  std::uint64_t stride = 0;  // 0 disables checkpoints
  std::vector<TracePoint> trace;

  double p_hat() const { return trials ? static_cast<double>(hits) / trials : 0.0; }
  double det_split() const { return hits ? static_cast<double>(det_greater_hits) / hits : 0.0; }
  double spectrum_fraction() const { return hits ? static_cast<double>(spectrum_hits) / hits : 0.0; }
  Interval ci(double level = 0.95) const { return wilson_ci(hits, trials, level); }

  bool counters_equal(const EstimatorState& o) const {
    return trials == o.trials && hits == o.hits && det_greater_hits == o.det_greater_hits &&
           spectrum_hits == o.spectrum_hits;
  }
};

inline EstimatorState& update(EstimatorState& s, const Verdict& v) {
  ++s.trials;
  if (v.ppt) {
    ++s.hits;
    s.det_greater_hits += v.det_pt_greater;
    s.spectrum_hits += v.spectrum_separable;
  }
  if (s.stride && s.trials % s.stride == 0) s.trace.push_back({s.trials, s.hits});
  return s;
}

// Counters add; b's checkpoints are shifted to follow a's draws.
inline EstimatorState merge(const EstimatorState& a, const EstimatorState& b) {
  EstimatorState r = a;
  r.trials += b.trials;
  r.hits += b.hits;
  r.det_greater_hits += b.det_greater_hits;
  r.spectrum_hits += b.spectrum_hits;
  if (!r.stride) r.stride = b.stride;
  for (const auto& p : b.trace) r.trace.push_back({a.trials + p.trials, a.hits + p.hits});
  return r;
}

inline void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace, double level = 0.95) {
  os << "trials,hits,p_hat,ci_lo,ci_hi\n";
  os.precision(12);
  for (const auto& p : trace) {
    auto ci = wilson_ci(p.hits, p.trials, level);
    os << p.trials << ',' << p.hits << ',' << static_cast<double>(p.hits) / p.trials << ',' << ci.lo << ',' << ci.hi
       << '\n';
  }
}

// HS and Bures verdicts from one shared Ginibre draw.
struct CoupledState {
  std::uint64_t trials = 0;
  std::uint64_t hs_hits = 0;
  std::uint64_t bures_hits = 0;

  void update(bool hs_ppt, bool bures_ppt) {
    ++trials;
    hs_hits += hs_ppt;
    bures_hits += bures_ppt;
  }
  CoupledState& operator+=(const CoupledState& o) {
    trials += o.trials;
    hs_hits += o.hs_hits;
    bures_hits += o.bures_hits;
    return *this;
  }
  double hs_hat() const { return trials ? static_cast<double>(hs_hits) / trials : 0.0; }
  double bures_hat() const { return trials ? static_cast<double>(bures_hits) / trials : 0.0; }
};

// b * (1 + f) / 2 with the HS correction factor f = hs_truth / hs_hat.
inline double corrected_bures(double bures_hat, double hs_hat, double hs_truth) {
  if (hs_hat == 0.0) throw DivisionByZero("HS estimate is zero");
  return bures_hat * (1.0 + hs_truth / hs_hat) / 2.0;
}

inline double corrected_bures(const CoupledState& c, double hs_truth) {
  if (c.hs_hits == 0) throw DivisionByZero("no HS hits in coupled run");
  return corrected_bures(c.bures_hat(), c.hs_hat(), hs_truth);
}

}  // namespace seplab
