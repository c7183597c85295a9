// SPDX-License-Identifier: Apache-2.0
#include "irscrb/rng.hpp"

#include <cmath>
#include <numbers>

namespace irscrb {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 2> split_key(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer over a salted state
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  // 52 bits: with 53 the top value (2^53 - 1/2) 2^-53 rounds up to 1
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 20) ^ (lo >> 12);
  const std::uint64_t mantissa = bits & ((std::uint64_t{1} << 52) - 1);
  return (static_cast<double>(mantissa) + 0.5) * 0x1.0p-52;
}

std::complex<double> complex_normal_at(std::uint64_t seed, Stream stream, std::uint64_t index,
                                       std::uint32_t substream) {
  const auto block = philox4x32_10(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
       static_cast<std::uint32_t>(stream), substream},
      split_key(seed));
  const double u1 = to_open_unit(block[0], block[1]);
  const double u2 = to_open_unit(block[2], block[3]);
  // |z|^2 ~ Exp(1), so E|z|^2 = 1
  return std::polar(std::sqrt(-std::log(u1)), 2.0 * std::numbers::pi * u2);
}

CounterRng::CounterRng(std::uint64_t seed, Stream stream, std::uint32_t substream)
    : key_(split_key(seed)), stream_(static_cast<std::uint32_t>(stream)), substream_(substream) {}

void CounterRng::refill() {
  buffer_ = philox4x32_10({static_cast<std::uint32_t>(counter_),
                           static_cast<std::uint32_t>(counter_ >> 32), stream_, substream_},
                          key_);
  ++counter_;
  used_ = 0;
}

std::uint32_t CounterRng::next_u32() {
  if (used_ == 4) refill();
  return buffer_[used_++];
}

double CounterRng::uniform() {
  const std::uint32_t hi = next_u32();
  const std::uint32_t lo = next_u32();
  return to_open_unit(hi, lo);
}

double CounterRng::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double phi = 2.0 * std::numbers::pi * uniform();
  spare_normal_ = r * std::sin(phi);
  has_spare_normal_ = true;
  return r * std::cos(phi);
}

std::complex<double> CounterRng::complex_normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::polar(std::sqrt(-std::log(u1)), 2.0 * std::numbers::pi * u2);
}

}  // namespace irscrb
