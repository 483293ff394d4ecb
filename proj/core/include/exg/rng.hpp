#ifndef EXG_RNG_HPP
#define EXG_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace exg {

// Philox4x32-10 counter-based generator.  A stream is identified by
// (key = master seed, counter lanes 2..3 = replica index), so replica
// streams are independent and can be regenerated in any order.
class Philox {
 public:
  Philox() : Philox(0, 0) {}
  Philox(uint64_t master_seed, uint64_t stream) {
    key_[0] = static_cast<uint32_t>(master_seed);
    key_[1] = static_cast<uint32_t>(master_seed >> 32);
    ctr_[0] = 0;
    ctr_[1] = 0;
    ctr_[2] = static_cast<uint32_t>(stream);
    ctr_[3] = static_cast<uint32_t>(stream >> 32);
    cached_ = false;
  }

  uint64_t next_u64() {
    if (cached_) {
      cached_ = false;
      return cache_;
    }
    std::array<uint32_t, 4> out = block();
    advance();
    cache_ = (static_cast<uint64_t>(out[2]) << 32) | out[3];
    cached_ = true;
    return (static_cast<uint64_t>(out[0]) << 32) | out[1];
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Exp(rate) waiting time
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  // uniform integer in [0, m), m > 0
  uint64_t below(uint64_t m) {
    // multiply-shift; bias is < 2^-64 * m, irrelevant at our m
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * m) >> 64);
  }

  double normal() {
    // Box-Muller, one value per call (second discarded: simplicity over speed
    // here, normals are not on the event-loop path)
    double u1 = uniform(), u2 = uniform();
    while (u1 == 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  static constexpr uint32_t kMul0 = 0xD2511F53u;
  static constexpr uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

  std::array<uint32_t, 4> block() const {
    std::array<uint32_t, 4> c = ctr_;
    uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      uint64_t p0 = static_cast<uint64_t>(kMul0) * c[0];
      uint64_t p1 = static_cast<uint64_t>(kMul1) * c[2];
      uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
      uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
      c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return c;
  }

  void advance() {
    if (++ctr_[0] == 0) ++ctr_[1];
  }

  std::array<uint32_t, 4> ctr_;
  std::array<uint32_t, 2> key_;
  uint64_t cache_ = 0;
  bool cached_ = false;
};

}  // namespace exg

#endif
