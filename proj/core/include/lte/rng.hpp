#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace lte {

namespace detail {
using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

/// Philox4x64 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x64_10(PhiloxCounter ctr, PhiloxKey key) noexcept;
}  // namespace detail

/// Counter-based random stream.
///
/// The Philox key is (seed, stream_id). Counter word 0 is the block index
/// within the stream; words 1..3 hold up to three child labels, so deriving a
/// substream is O(1) and never consumes draws from the parent. Two streams
/// that differ in seed, stream_id or any label share no Philox block.
///
/// Satisfies UniformRandomBitGenerator, so <random> distributions accept it.
class RngStream {
 public:
  using result_type = std::uint64_t;
  static constexpr int kMaxDepth = 3;

  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  /// Independent substream labelled by `label`. Throws std::length_error
  /// past kMaxDepth nested labels.
  RngStream child(std::uint64_t label) const;
  RngStream child(std::uint64_t l1, std::uint64_t l2) const { return child(l1).child(l2); }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  /// Uniform on the open interval (0,1), 53-bit resolution.
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }
  /// Standard normal (ziggurat).
  double normal();
  std::uint64_t poisson(double mean);

  std::uint64_t seed() const noexcept { return key_[0]; }
  std::uint64_t stream_id() const noexcept { return key_[1]; }
  int depth() const noexcept { return depth_; }

 private:
  void refill() noexcept;

  detail::PhiloxKey key_;
  detail::PhiloxCounter ctr_{};
  std::array<std::uint64_t, 4> buf_{};
  int pos_ = 4;
  int depth_ = 0;
};

inline RngStream derive_stream(std::uint64_t seed, std::uint64_t stream_id) noexcept {
  return RngStream(seed, stream_id);
}

}  // namespace lte
