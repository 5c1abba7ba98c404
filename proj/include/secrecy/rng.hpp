// SPDX-License-Identifier: MIT
//
// Counter-based random number generation. Every random quantity in the
// library is addressed by (seed, purpose, sample index), so a draw is a pure
// function of its address: results do not depend on evaluation order, worker
// count, or which other draws happened before. This is what makes Monte Carlo
// sweeps bit-reproducible under re-partitioning.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace secrecy {

// Philox4x32-10 block function (Salmon et al. semantics): 128-bit counter,
// 64-bit key, ten S-P rounds of 32x32->64 multiplies with Weyl key schedule.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// Stream purposes: distinct tags give statistically independent streams for
// the same (seed, sample index).
enum class Draw : std::uint32_t {
  kMainEstimate = 1,   // normalized destination-channel estimate entries
  kEveEstimate = 2,    // normalized eavesdropper-channel estimate entries
  kDataNorm = 3,       // squared norm of the data block
  kTrueMain = 4,       // true destination channel
  kTrueEve = 5,        // true eavesdropper channel
  kReverseNoise = 6,   // noise at the source during reverse training
  kForwardNoiseDst = 7,
  kForwardNoiseEve = 8,
  kForwardAn = 9,      // artificial-noise mixing matrix in forward training
  kLeakageAn = 10,     // mixing matrix for the leakage statistic
  kLeakageError = 11,  // estimation-error vector for the leakage statistic
  kParams = 12,        // randomized parameter sets in tests
};

// One addressed random stream. Each Philox block yields two doubles; the
// intra-stream block counter supports 2^32 blocks per (seed, purpose, index).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, Draw purpose, std::uint64_t index)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        base_{static_cast<std::uint32_t>(index),
              static_cast<std::uint32_t>(index >> 32), 0,
              static_cast<std::uint32_t>(purpose)} {}

  // Uniform on (0, 1]; never returns 0, so log(uniform()) is always finite.
  double uniform() {
    const std::uint64_t bits = next64();
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
  }

  // Unit-mean exponential.
  double exponential() { return -std::log(uniform()); }

  // Standard circularly-symmetric complex Gaussian: real and imaginary parts
  // are independent N(0, 1/2), so E|z|^2 = 1.
  std::complex<double> complex_gaussian() {
    const double r = std::sqrt(-std::log(uniform()));
    const double phi = 2.0 * kPi * uniform();
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  std::uint64_t next64() {
    if (word_ >= 4) {
      auto ctr = base_;
      ctr[2] = block_++;
      buf_ = Philox4x32::block(ctr, key_);
      word_ = 0;
    }
    const std::uint64_t hi = buf_[word_];
    const std::uint64_t lo = buf_[word_ + 1];
    word_ += 2;
    return (hi << 32) | lo;
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> base_;
  std::array<std::uint32_t, 4> buf_{};
  std::uint32_t block_ = 0;
  int word_ = 4;
};

}  // namespace secrecy
