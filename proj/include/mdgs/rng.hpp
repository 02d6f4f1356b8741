#ifndef MDGS_RNG_HPP
#define MDGS_RNG_HPP

#include <array>
#include <cstdint>

namespace mdgs {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// A block is a pure function of (key, counter), which is what makes
// per-site and per-sample draws order-independent across worker threads.
struct Philox4x32 {
  static constexpr std::uint32_t kMult0 = 0xD2511F53u;
  static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 2> key,
                                            std::array<std::uint32_t, 4> ctr);
};

// Named sub-streams. A stream id plus a sample index select an independent
// sequence; the draw index walks along it.
enum class Stream : std::uint32_t {
  kWeights = 0,
  kWeightsPrime = 1,
  kResampleCoins = 2,
  kInaccessibleShift = 3,
  kReplacement = 4,
  kSynthetic = 5,
  kBootstrap = 6,
  kTrial = 7,
};

// One logical i.i.d. stream, pure in (seed, stream, sample, index).
// uniform(i) and normal(i) consume the same counter block, so a stream
// must be used with a single draw kind per index.
class RngStream {
 public:
  RngStream(std::uint64_t seed, Stream stream, std::uint32_t sample = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(static_cast<std::uint32_t>(stream)),
        sample_(sample) {}

  std::uint64_t bits(std::uint64_t index) const;
  // [0, 1), 53-bit resolution.
  double uniform(std::uint64_t index) const;
  // (0, 1], never exactly zero; safe under log().
  double uniform_pos(std::uint64_t index) const;
  // Standard normal via Box-Muller on one counter block.
  double normal(std::uint64_t index) const;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
  std::uint32_t sample_;
};

}  // namespace mdgs

#endif
