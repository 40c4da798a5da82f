#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace triopo {

/// Philox4x32-10 counter-based generator.
///
/// A stream is addressed by (seed, stream index); draws inside the stream
/// advance a 128-bit counter. Streams derived from different indices are
/// statistically independent, so trajectory ensembles can be evaluated in
/// any parallel order and still reproduce bit-identical results.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
    ctr_[0] = 0;
    ctr_[1] = 0;
    ctr_[2] = static_cast<std::uint32_t>(stream);
    ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
  }

  std::uint64_t next_u64() {
    if (have_ == 0) {
      block();
      have_ = 2;
    }
    --have_;
    return out64_[1 - have_];
  }

  /// Uniform in (0,1]; never returns 0 so log() is always safe.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  /// Pair of independent standard normals (Marsaglia polar transform).
  void next_normal_pair(double& a, double& b) {
    double x, y, s;
    do {
      x = 2.0 * next_uniform() - 1.0;
      y = 2.0 * next_uniform() - 1.0;
      s = x * x + y * y;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    a = x * m;
    b = y * m;
  }

  /// Standard normal; draws come in cached pairs.
  double next_normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double a, b;
    next_normal_pair(a, b);
    cached_ = b;
    has_cached_ = true;
    return a;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static void round(std::uint32_t x[4], std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t y0 = hi1 ^ x[1] ^ k0;
    const std::uint32_t y1 = lo1;
    const std::uint32_t y2 = hi0 ^ x[3] ^ k1;
    const std::uint32_t y3 = lo0;
    x[0] = y0;
    x[1] = y1;
    x[2] = y2;
    x[3] = y3;
  }

  void block() {
    std::uint32_t x[4] = {ctr_[0], ctr_[1], ctr_[2], ctr_[3]};
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int r = 0; r < 10; ++r) {
      round(x, k0, k1);
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    out64_[0] = (static_cast<std::uint64_t>(x[0]) << 32) | x[1];
    out64_[1] = (static_cast<std::uint64_t>(x[2]) << 32) | x[3];
    if (++ctr_[0] == 0 && ++ctr_[1] == 0) ++ctr_[2];
  }

  std::uint32_t key_[2];
  std::uint32_t ctr_[4];
  std::uint64_t out64_[2] = {0, 0};
  int have_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace triopo
