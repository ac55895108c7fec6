#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <type_traits>
#include <vector>

#include "criteria.hpp"
#include "ensembles.hpp"
#include "estimator.hpp"
#include "qrseq.hpp"
#include "stream.hpp"

namespace seplab {

struct RunOptions {
  MeasureSpec spec;
  bool x_states = false;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  StreamKind stream = StreamKind::pseudo;
  double alpha0 = 0.5;
  std::uint64_t stride = 5000000;
};

// Normals consumed per draw, the quasirandom dimension s.
inline int normals_per_draw(const MeasureSpec& spec) {
  const int n = static_cast<int>(spec.n());
  const int per = spec.field == Field::R ? 1 : 2;
  const bool mixed = spec.family.kind == Family::bures || spec.family.kind == Family::interpolated;
  const int cols = mixed ? (spec.field == Field::R ? n + 1 : n) : static_cast<int>(spec.ginibre_cols());
  return per * n * cols + (mixed && spec.family.mixing() != 0.0 ? per * n * n : 0);
}

namespace detail {

// Work split into fixed chunks, each with its own stream, so results do not depend on the thread count.
struct ChunkPlan {
  std::uint64_t samples = 0;
  std::uint64_t chunk = 1000000;
  std::uint64_t count() const { return (samples + chunk - 1) / chunk; }
  std::uint64_t begin(std::uint64_t c) const { return c * chunk; }
  std::uint64_t size(std::uint64_t c) const { return std::min(chunk, samples - c * chunk); }
};

template <class Fn>
void parallel_chunks(std::uint64_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::uint64_t c = 0; c < count; ++c) fn(c);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      try {
        for (std::uint64_t c; (c = next.fetch_add(1)) < count;) fn(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

template <class T, class Stream>
EstimatorState run_typed(const RunOptions& opt) {
  const MeasureSpec& spec = opt.spec;
  ChunkPlan plan{opt.samples, opt.stride ? std::gcd<std::uint64_t>(opt.stride, 1000000) : 1000000};
  std::vector<EstimatorState> parts(plan.count());
  const int dim = normals_per_draw(spec);
  QrState proto = std::is_same_v<Stream, QuasiStream> ? QrState(dim, opt.alpha0) : QrState();
  parallel_chunks(plan.count(), opt.threads, [&](std::uint64_t c) {
    FastClassifier<T> classify(static_cast<int>(spec.m_a), static_cast<int>(spec.m_b));
    EstimatorState st;
    auto body = [&](auto& sampler, auto& s) {
      for (std::uint64_t i = 0; i < plan.size(c); ++i) {
        sampler.draw(s);
        update(st, classify(sampler.w()));
      }
    };
    auto go = [&](auto& s) {
      if (opt.x_states) {
        XStateSampler<T> sampler(spec);
        body(sampler, s);
      } else {
        DensitySampler<T> sampler(spec);
        body(sampler, s);
      }
    };
    if constexpr (std::is_same_v<Stream, PseudoStream>) {
      PseudoStream s(opt.seed, c);
      go(s);
    } else {
      // Index 0 is skipped: with alpha0 = 0 it is the all-zero point.
      QuasiStream s(skip_to(proto, plan.begin(c) + 1));
      go(s);
    }
    parts[c] = st;
  });
  EstimatorState total;
  total.stride = opt.stride;
  for (const auto& p : parts) {
    total = merge(total, p);
    if (total.stride && total.trials % total.stride == 0) total.trace.push_back({total.trials, total.hits});
  }
  if (total.trace.empty() || total.trace.back().trials != total.trials) total.trace.push_back({total.trials, total.hits});
  return total;
}

template <class T, class Stream>
CoupledState run_coupled_typed(const RunOptions& opt, double x) {
  const MeasureSpec& spec = opt.spec;
  ChunkPlan plan{opt.samples, 1000000};
  std::vector<CoupledState> parts(plan.count());
  MeasureSpec shape = spec;
  shape.family = Family::Interpolated(x);
  const int dim = normals_per_draw(shape);
  QrState proto = std::is_same_v<Stream, QuasiStream> ? QrState(dim, opt.alpha0) : QrState();
  parallel_chunks(plan.count(), opt.threads, [&](std::uint64_t c) {
    FastClassifier<T> classify(static_cast<int>(spec.m_a), static_cast<int>(spec.m_b));
    DensitySampler<T> sampler(shape);
    CoupledState st;
    auto go = [&](auto& s) {
      for (std::uint64_t i = 0; i < plan.size(c); ++i) {
        sampler.draw_coupled(s, x);
        bool hs = classify(sampler.w()).ppt;
        bool mixed = classify(sampler.w_mixed()).ppt;
        st.update(hs, mixed);
      }
    };
    if constexpr (std::is_same_v<Stream, PseudoStream>) {
      PseudoStream s(opt.seed, c);
      go(s);
    } else {
      QuasiStream s(skip_to(proto, plan.begin(c) + 1));
      go(s);
    }
    parts[c] = st;
  });
  CoupledState total;
  for (const auto& p : parts) total += p;
  return total;
}

}  // namespace detail

inline EstimatorState run_estimate(const RunOptions& opt) {
  opt.spec.validate();
  if (opt.samples == 0) throw InvalidConfig("samples must be positive");
  const bool real = opt.spec.field == Field::R;
  if (opt.stream == StreamKind::quasi) {
    if (opt.x_states) throw InvalidConfig("X-state sampling uses a variable number of variates; use a pseudo stream");
    return real ? detail::run_typed<double, QuasiStream>(opt) : detail::run_typed<cplx, QuasiStream>(opt);
  }
  return real ? detail::run_typed<double, PseudoStream>(opt) : detail::run_typed<cplx, PseudoStream>(opt);
}

// Joint HS / interpolated-measure run with one Ginibre draw shared by both verdicts.
inline CoupledState run_coupled(const RunOptions& opt, double x = 0.5) {
  opt.spec.validate();
  const bool real = opt.spec.field == Field::R;
  if (opt.stream == StreamKind::quasi)
    return real ? detail::run_coupled_typed<double, QuasiStream>(opt, x) : detail::run_coupled_typed<cplx, QuasiStream>(opt, x);
  return real ? detail::run_coupled_typed<double, PseudoStream>(opt, x) : detail::run_coupled_typed<cplx, PseudoStream>(opt, x);
}

}  // namespace seplab
