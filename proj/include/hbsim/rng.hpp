#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace hbsim {

/// 64-bit FNV-1a over the bytes of `text`.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// One round of the SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/**
 * Seed for the stream `name` of run `run_index` under `root`:
 *
 *     splitmix64(splitmix64(root ^ fnv1a64(name)) ^ splitmix64(run_index + 1))
 *
 * Streams with different names or run indices get unrelated seeds.
 */
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t run_index,
                          std::string_view name) noexcept;

/**
 * A named, reproducible random stream.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard. The standard <random> distributions are implementation-defined,
 * so every variate is derived here from raw 64-bit words:
 *
 *  - uniform:  lo + (hi - lo) * (w >> 11) * 2^-53
 *  - index:    rejection sampling on w below the largest multiple of n
 *  - normal:   Marsaglia polar method (the second variate is discarded)
 *  - gamma:    Marsaglia-Tsang squeeze for shape >= 1; for shape < 1 a
 *              gamma(shape + 1) draw times U^(1/shape)
 */
class RngStream {
 public:
  RngStream(std::string name, std::uint64_t seed);

  const std::string& name() const noexcept { return name_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on [0, 1) with 53 random bits.
  double draw_unit();
  /// Uniform on [lo, hi); returns lo when lo == hi.
  double draw_uniform(double lo, double hi);
  /// Uniform over {0, ..., n - 1}.
  std::uint64_t draw_index(std::uint64_t n);
  double draw_normal();
  /// Gamma with mean shape * scale and variance shape * scale^2.
  double draw_gamma(double shape, double scale);

 private:
  std::string name_;
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace hbsim
