#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "qrseq.hpp"
#include "rng.hpp"

namespace seplab {

class PseudoStream {
 public:
  explicit PseudoStream(std::uint64_t seed = 0, std::uint64_t stream_id = 0) : rng_(seed, stream_id) {}

  void begin_draw() {}
  double next_uniform() { return rng_.uniform(); }
  double next_normal() { return fast_normal(rng_.uniform()); }
  CounterRng& rng() { return rng_; }

 private:
  CounterRng rng_;
};

// One quasirandom point per draw; each draw may consume at most s coordinates.
// Points with a coordinate exactly 0 are skipped, since the normal transform is undefined there.
class QuasiStream {
 public:
  explicit QuasiStream(QrState state) : state_(std::move(state)), coords_(state_.s) {}

  void begin_draw() {
    for (;;) {
      if (state_.n >= (std::uint64_t{1} << 63)) throw StreamExhausted("quasirandom index range exhausted");
      state_.point(state_.n++, coords_.data());
      bool zero = false;
      for (double c : coords_) zero |= (c == 0.0);
      if (!zero) break;
      ++skipped_;
    }
    used_ = 0;
    started_ = true;
  }
  double next_uniform() {
    if (!started_ || used_ >= state_.s)
      throw StreamExhausted("quasi stream of dimension " + std::to_string(state_.s) + " exhausted within a draw");
    return coords_[used_++];
  }
  double next_normal() { return fast_normal(next_uniform()); }

  const QrState& state() const { return state_; }
  std::uint64_t skipped() const { return skipped_; }
  int used() const { return used_; }

 private:
  QrState state_;
  std::vector<double> coords_;
  int used_ = 0;
  bool started_ = false;
  std::uint64_t skipped_ = 0;
};

enum class StreamKind { pseudo, quasi };

// Type-erased stream for callers that pick the kind at run time.
class RandomStream {
 public:
  static RandomStream pseudo(std::uint64_t seed, std::uint64_t stream_id = 0) {
    return RandomStream(PseudoStream(seed, stream_id));
  }
  static RandomStream quasi(QrState state) { return RandomStream(QuasiStream(std::move(state))); }

  StreamKind kind() const { return impl_.index() == 0 ? StreamKind::pseudo : StreamKind::quasi; }
  void begin_draw() {
    std::visit([](auto& s) { s.begin_draw(); }, impl_);
  }
  double next_uniform() {
    return std::visit([](auto& s) { return s.next_uniform(); }, impl_);
  }
  double next_normal() {
    return std::visit([](auto& s) { return s.next_normal(); }, impl_);
  }

 private:
  template <class S>
  explicit RandomStream(S s) : impl_(std::move(s)) {}
  std::variant<PseudoStream, QuasiStream> impl_;
};

}  // namespace seplab
