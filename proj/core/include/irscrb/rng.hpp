// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace irscrb {

/// Philox4x32-10 block function (Salmon et al., counter-based).
/// Pure: the output depends only on (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Named substreams. Every random draw in the library is addressed by
/// (seed, stream, index), so there is no hidden global generator state.
enum class Stream : std::uint32_t {
  channel_nlos = 1,
  reverse_channel_nlos = 2,
  target_fading = 3,
  randomization = 4,
  random_phase = 5,
  user = 100,
};

/// 64-bit mixing used to derive child seeds (e.g. one per trial).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// Uniform in the open interval (0, 1) built from two 32-bit words.
double to_open_unit(std::uint32_t hi, std::uint32_t lo);

/// Directly addressed circular complex Gaussian CN(0, 1): one Philox block
/// per draw, Box-Muller on the block's two 52-bit uniforms.
std::complex<double> complex_normal_at(std::uint64_t seed, Stream stream,
                                       std::uint64_t index,
                                       std::uint32_t substream = 0);

/// Sequential view over one (seed, stream, substream) counter range.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, Stream stream, std::uint32_t substream = 0);

  std::uint32_t next_u32();
  double uniform();
  double normal();
  std::complex<double> complex_normal();

  std::uint64_t position() const { return counter_; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
  std::uint32_t substream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace irscrb
