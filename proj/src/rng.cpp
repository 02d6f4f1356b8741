#include "mdgs/rng.hpp"

#include <cmath>

namespace mdgs {

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 2> key,
                                               std::array<std::uint32_t, 4> ctr) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kMult0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(kMult1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

namespace {

std::array<std::uint32_t, 4> stream_block(const std::array<std::uint32_t, 2>& key,
                                          std::uint32_t stream, std::uint32_t sample,
                                          std::uint64_t index) {
  return Philox4x32::block(key, {static_cast<std::uint32_t>(index),
                                 static_cast<std::uint32_t>(index >> 32),
                                 sample, stream});
}

}  // namespace

std::uint64_t RngStream::bits(std::uint64_t index) const {
  const auto out = stream_block(key_, stream_, sample_, index);
  return (std::uint64_t(out[0]) << 32) | out[1];
}

double RngStream::uniform(std::uint64_t index) const {
  return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos(std::uint64_t index) const {
  return static_cast<double>((bits(index) >> 11) + 1) * 0x1.0p-53;
}

double RngStream::normal(std::uint64_t index) const {
  const auto out = stream_block(key_, stream_, sample_, index);
  const std::uint64_t b0 = (std::uint64_t(out[0]) << 32) | out[1];
  const std::uint64_t b1 = (std::uint64_t(out[2]) << 32) | out[3];
  const double u1 = static_cast<double>((b0 >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(b1 >> 11) * 0x1.0p-53;        // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace mdgs
