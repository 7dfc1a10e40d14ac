// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rwrs::simkit {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3", SC'11).  Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

//---------------------------------------------------------------------------//
/*!
 * Counter-based random stream.
 *
 * The key is the master seed; the 128-bit counter is (block index, stream id).
 * Distinct stream ids therefore address disjoint counter ranges and can never
 * overlap, and any stream replays exactly from its (seed, id) pair.
 *
 * Satisfies UniformRandomBitGenerator, so the standard distributions work
 * with it.  Single-owner: move between threads, never share.
 */
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
      : seed_(master_seed), id_(stream_id) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (pos_ == 2) refill();
    return buf_[pos_++];
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1); safe as an argument to log().
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), bound > 0 (Lemire's method).
  std::uint64_t below(std::uint64_t bound) noexcept;

  bool bit() noexcept {
    if (nbits_ == 0) {
      bits_ = (*this)();
      nbits_ = 64;
    }
    const bool b = bits_ & 1u;
    bits_ >>= 1;
    --nbits_;
    return b;
  }

  double normal() noexcept;

  std::uint64_t master_seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return id_; }
  std::uint64_t blocks_consumed() const noexcept { return block_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int pos_ = 2;
  std::uint64_t bits_ = 0;
  int nbits_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

inline RngStream derive_stream(std::uint64_t master_seed,
                               std::uint64_t stream_id) noexcept {
  return RngStream(master_seed, stream_id);
}

// Distinct stream-id namespaces for the estimators of one experiment, so that
// estimators sharing a master seed never reuse each other's streams.
constexpr std::uint64_t stream_space(std::uint64_t tag) noexcept {
  return tag << 40;
}

}  // namespace rwrs::simkit
