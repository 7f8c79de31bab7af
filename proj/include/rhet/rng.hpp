#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace rhet {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123). The
/// state is a 128-bit counter and a 64-bit key, so any (key, counter) pair can
/// be reached directly and streams keyed by task coordinates never overlap.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t key, std::uint64_t stream = 0);

  static Block bijection(Block c, std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
      c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    return c;
  }

  result_type operator()() {
    if (used_ == 4) refill();
    return buffer_[used_++];
  }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  void refill() {
    buffer_ = bijection(counter_, key_);
    // 64-bit increment of the low counter words; the high words hold the stream.
    if (++counter_[0] == 0) ++counter_[1];
    used_ = 0;
  }

  Block counter_{};
  std::array<std::uint32_t, 2> key_{};
  Block buffer_{};
  int used_ = 4;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed from a parent seed and an ordered list of tags
/// (replicate index, tree index, ...). Independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags);

/// Convenience distributions over Philox. Distribution algorithms are fixed
/// here rather than taken from <random> so streams are identical across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(seed, stream) {}

  std::uint32_t next_u32() { return engine_(); }
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Uniform integer in [0, bound).
  std::uint32_t below(std::uint32_t bound) {
    // Lemire's multiply-shift with rejection.
    std::uint64_t m = static_cast<std::uint64_t>(engine_()) * bound;
    auto low = static_cast<std::uint32_t>(m);
    if (low < bound) {
      const std::uint32_t threshold = (0u - bound) % bound;
      while (low < threshold) {
        m = static_cast<std::uint64_t>(engine_()) * bound;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::span<T> v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = below(static_cast<std::uint32_t>(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Moves a uniformly chosen k-subset into v[0..k) (partial Fisher-Yates).
  template <class T>
  void partial_shuffle(std::span<T> v, std::size_t k) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
      const std::size_t j = i + below(static_cast<std::uint32_t>(n - i));
      std::swap(v[i], v[j]);
    }
  }

  Philox4x32& engine() { return engine_; }

 private:
  Philox4x32 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rhet
