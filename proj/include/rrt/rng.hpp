#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rrt {

// Counter-based random stream in the style of SplittableRandom: the state is
// an affine counter (state += gamma per draw) pushed through a strong 64-bit
// mixer. A stream is fully identified by (seed, stream_id); distinct stream
// ids select distinct odd increments, so replicates can each own a stream
// without coordination, and jump-ahead is O(1).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed),
        stream_id_(stream_id),
        state_(mix(seed)),
        gamma_(mix_gamma(stream_id)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() {
    state_ += gamma_;
    return mix(state_);
  }

  // Uniform on [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1].
  double next_double_pos() { return 1.0 - next_double(); }

  // Uniform integer in [0, bound). Lemire's multiply-shift rejection, unbiased.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool next_bernoulli(double prob) { return next_double() < prob; }

  double next_exponential(double rate = 1.0) {
    if (!(rate > 0.0)) throw std::invalid_argument("next_exponential: rate must be positive");
    // -log1p(-u) maps u in [0,1) to [0,inf); the u=0 draw is redrawn so the
    // result is strictly positive and clock/atom invariants stay strict.
    for (;;) {
      const double x = -std::log1p(-next_double());
      if (x > 0.0) return x / rate;
    }
  }

  // Deterministically derived child stream. Derivation hashes (stream_id, key),
  // so substreams of distinct streams do not collide in practice.
  RngStream substream(std::uint64_t key) const {
    const std::uint64_t derived =
        mix(stream_id_ ^ (key + 0x9e3779b97f4a7c15ULL + (stream_id_ << 6) + (stream_id_ >> 2)));
    return RngStream(seed_, derived);
  }

  // Jump ahead n draws in O(1).
  void discard(std::uint64_t n) { state_ += gamma_ * n; }

 private:
  // Stafford variant 13 of the SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Increment derivation from SplittableRandom: odd, and rejected toward a
  // constant when the bit pattern is too regular.
  static std::uint64_t mix_gamma(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    z = (z ^ (z >> 33)) | 1ULL;
    if (__builtin_popcountll(z ^ (z >> 1)) < 24) z ^= 0xaaaaaaaaaaaaaaaaULL;
    return z;
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
  std::uint64_t gamma_;
};

}  // namespace rrt
