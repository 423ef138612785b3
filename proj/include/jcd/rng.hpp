#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace jcd {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3"). A stream is a (key, counter) pair, so a
// copy of a stream replays exactly the same draws.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block Generate(Block counter, Key key);
};

// Named, splittable random stream. Substreams are derived by hashing the
// parent key with a label, so draws never depend on evaluation order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0);
  RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  RandomStream Substream(std::uint64_t label) const;

  std::uint64_t NextU64();
  // Uniform in the open interval (0, 1).
  double Uniform();
  double Normal();
  // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> ComplexNormal(double variance = 1.0);
  // Uniform integer in [0, n), n >= 1.
  std::uint64_t UniformInt(std::uint64_t n);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  Philox4x32::Block NextBlock();

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Stream labels used across the library.
enum class StreamLabel : std::uint64_t {
  kInit = 0x696e6974,
  kTrain = 0x747261696e,
  kEval = 0x6576616c,
  kChannel = 0x6368616e,
  kSnr = 0x736e72,
};

inline std::uint64_t Label(StreamLabel l) { return static_cast<std::uint64_t>(l); }

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace jcd
