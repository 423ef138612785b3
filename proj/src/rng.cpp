#include "jcd/rng.hpp"

#include <cmath>
#include <numbers>

namespace jcd {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void MulHiLo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// 53 random bits mapped to (0, 1).
inline double ToOpenUnit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Block Philox4x32::Generate(Block ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kMul0, ctr[0], hi0, lo0);
    MulHiLo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : key_(SplitMix64(seed)) {}

RandomStream::RandomStream(std::uint64_t seed,
                           std::initializer_list<std::uint64_t> path)
    : key_(SplitMix64(seed)) {
  for (std::uint64_t label : path) key_ = SplitMix64(key_ ^ SplitMix64(label));
}

RandomStream RandomStream::Substream(std::uint64_t label) const {
  RandomStream child(0);
  child.key_ = SplitMix64(key_ ^ SplitMix64(label + 0x5bd1e995ULL));
  return child;
}

Philox4x32::Block RandomStream::NextBlock() {
  const std::uint64_t c = counter_++;
  return Philox4x32::Generate(
      {static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32), 0, 0},
      {static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32)});
}

std::uint64_t RandomStream::NextU64() {
  const auto b = NextBlock();
  return (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
}

double RandomStream::Uniform() { return ToOpenUnit(NextU64()); }

double RandomStream::Normal() { return ComplexNormal(2.0).real(); }

std::complex<double> RandomStream::ComplexNormal(double variance) {
  // Box-Muller on one 128-bit block; each part has variance `variance / 2`.
  const auto b = NextBlock();
  const double u1 = ToOpenUnit((static_cast<std::uint64_t>(b[0]) << 32) | b[1]);
  const double u2 = ToOpenUnit((static_cast<std::uint64_t>(b[2]) << 32) | b[3]);
  const double r = std::sqrt(-variance * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

std::uint64_t RandomStream::UniformInt(std::uint64_t n) {
  // Lemire's nearly-divisionless bounded integer with rejection.
  for (;;) {
    const std::uint64_t x = NextU64();
    const unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    const auto low = static_cast<std::uint64_t>(m);
    if (low >= n || low >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
  }
}

}  // namespace jcd
