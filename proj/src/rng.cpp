#include "hbsim/rng.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "hbsim/errors.hpp"

namespace hbsim {

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t run_index,
                          std::string_view name) noexcept {
  return splitmix64(splitmix64(root ^ fnv1a64(name)) ^
                    splitmix64(run_index + 1));
}

RngStream::RngStream(std::string name, std::uint64_t seed)
    : name_(std::move(name)), seed_(seed), engine_(seed) {}

double RngStream::draw_unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::draw_uniform(double lo, double hi) {
  if (!(lo <= hi)) {
    throw ParameterError("uniform: lo > hi");
  }
  if (lo == hi) return lo;
  double x = lo + (hi - lo) * draw_unit();
  // Rounding can land exactly on hi for some (lo, hi) pairs.
  if (x >= hi) x = std::nextafter(hi, lo);
  return x;
}

std::uint64_t RngStream::draw_index(std::uint64_t n) {
  if (n == 0) {
    throw ParameterError("index: n must be positive");
  }
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = kMax - (kMax % n + 1) % n;
  std::uint64_t w = engine_();
  while (w > limit) w = engine_();
  return w % n;
}

double RngStream::draw_normal() {
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * draw_unit() - 1.0;
    v = 2.0 * draw_unit() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

double RngStream::draw_gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) ||
      !std::isfinite(scale)) {
    throw ParameterError("gamma: shape and scale must be positive and finite");
  }
  if (shape < 1.0) {
    const double boosted = draw_gamma(shape + 1.0, 1.0);
    double u = draw_unit();
    while (u == 0.0) u = draw_unit();
    return scale * boosted * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = 0.0;
    double v = 0.0;
    do {
      z = draw_normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = draw_unit();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return scale * d * v;
    if (u > 0.0 && std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) {
      return scale * d * v;
    }
  }
}

}  // namespace hbsim
