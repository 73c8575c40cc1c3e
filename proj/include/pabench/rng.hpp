#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pabench {

/// Seedable 64-bit generator. The engine is mt19937_64, whose output
/// sequence is fixed by the C++ standard; every distribution used by the
/// library is implemented here so results do not depend on the standard
/// library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., bound - 1}; bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform on {lo, ..., hi}.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Standard exponential variate.
  double exponential();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent stream seed from a master seed and a tag path,
/// e.g. (master, scenario, replicate).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

}  // namespace pabench
