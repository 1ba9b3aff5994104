// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fracbranch {

/// Counter-based random stream (Philox4x32-10).
///
/// The 64-bit seed is the Philox key; the stream id occupies the upper half of
/// the 128-bit counter, the block index the lower half. Distinct
/// (seed, stream_id) pairs therefore address disjoint parts of the same
/// bijection, and identical pairs replay bit-for-bit. Satisfies
/// UniformRandomBitGenerator so it can also feed <random> distributions.
///
/// A stream is not thread-safe; give each worker its own (see substream()).
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard exponential, mean 1.
  double exponential();
  /// Standard normal (Box-Muller, pairs cached).
  double normal();

  /// Independent child stream, a pure function of (seed, stream_id, index).
  RngStream substream(std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int next_word_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// One Philox4x32-10 block; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

}  // namespace fracbranch
