#pragma once
#include <cmath>
#include <cstdint>
#include <array>

namespace specbound::est {

// Philox4x64-10 counter-based generator. Stateless indexing: a (seed, stream_id)
// pair plus a block counter fully determines every output, so trials can be
// evaluated in any order by any number of workers with identical results.
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream_id)
      : key_{seed, 0}, ctr_{0, 0, stream_id, 0} {}

  std::array<std::uint64_t, 4> next_block() {
    ++ctr_[0];  // block index, advanced before use; [1] spare, [2]=stream, [3] spare
    if (ctr_[0] == 0) ++ctr_[1];
    std::array<std::uint64_t, 4> x = ctr_;
    std::uint64_t k0 = key_[0], k1 = key_[1];
    for (int r = 0; r < 10; ++r) {
      x = round(x, k0, k1);
      k0 += 0x9E3779B97F4A7C15ULL;
      k1 += 0xBB67AE8584CAA73BULL;
    }
    return x;
  }

 private:
  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }
  static std::array<std::uint64_t, 4> round(const std::array<std::uint64_t, 4>& x,
                                            std::uint64_t k0, std::uint64_t k1) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(0xD2E7470EE14C6C93ULL, x[0], hi0, lo0);
    mulhilo(0xCA5A826395121157ULL, x[2], hi1, lo1);
    return {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
  }

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> ctr_;
};

struct RandomSource {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// Box-Muller over Philox blocks: one block -> four N(0,1) draws.
class GaussianStream {
 public:
  explicit GaussianStream(RandomSource src) : gen_(src.seed, src.stream_id) {}

  double next() {
    if (have_ == 0) refill();
    return buf_[--have_];
  }

  template <typename Vec>
  void fill(Vec& v) {
    for (auto& x : v) x = next();
  }

 private:
  static double to_unit(std::uint64_t x) {
    // (0,1) strictly: safe for log()
    return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53;
  }
  void refill() {
    auto b = gen_.next_block();
    double u1 = to_unit(b[0]), u2 = to_unit(b[1]);
    double u3 = to_unit(b[2]), u4 = to_unit(b[3]);
    double r1 = std::sqrt(-2.0 * std::log(u1)), a1 = 2.0 * M_PI * u2;
    double r2 = std::sqrt(-2.0 * std::log(u3)), a2 = 2.0 * M_PI * u4;
    buf_[3] = r1 * std::cos(a1);
    buf_[2] = r1 * std::sin(a1);
    buf_[1] = r2 * std::cos(a2);
    buf_[0] = r2 * std::sin(a2);
    have_ = 4;
  }

  Philox gen_;
  double buf_[4] = {};
  int have_ = 0;
};

}  // namespace specbound::est
