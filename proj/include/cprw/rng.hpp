#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace cprw {

/// Counter-based random stream (Philox4x32-10).
///
/// The 64-bit master seed is the cipher key and the 64-bit stream id fills
/// the upper half of the 128-bit counter, so distinct (seed, id) pairs never
/// share a counter block. Streams are plain values: copying one forks an
/// identical sequence, and any site or trial can be addressed in O(1).
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
      : master_seed_(master_seed), stream_id_(stream_id) {}

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() noexcept {
    if (buffered_ == 0) refill();
    return buffer_[--buffered_];
  }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard exponential variate.
  double exponential() noexcept;

  /// Uniform integer in [0, bound), bound > 0 (Lemire reduction).
  std::uint64_t below(std::uint64_t bound) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() noexcept { return next_u64(); }

 private:
  void refill() noexcept;

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

/// Raw Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

inline RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept {
  return RngStream(master_seed, stream_id);
}

/// SplitMix64 finalizer; used to derive purpose-specific master seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for an auxiliary random object (environment, scenery, ...) owned by
/// one trial. `purpose` separates object kinds sharing a trial.
constexpr std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t purpose,
                                   std::uint64_t trial) noexcept {
  return mix64(mix64(master_seed ^ mix64(purpose)) + trial);
}

/// Bijection Z -> N used to turn signed lattice sites into stream ids.
constexpr std::uint64_t zigzag(std::int64_t v) noexcept {
  return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

}  // namespace cprw
