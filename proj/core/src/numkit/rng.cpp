#include "bitext/numkit/rng.hpp"

#include <cmath>
#include <numbers>

namespace bitext::num {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ParameterError("Rng::below: empty range");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
  std::uint64_t x = engine_();
  while (x > limit) x = engine_();
  return x % n;
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::fork(std::uint64_t salt) {
  // splitmix64 finalizer over (next draw ^ salt)
  std::uint64_t z = engine_() ^ (salt * 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return Rng(z ^ (z >> 31));
}

template <typename Real>
BasicMatrix<Real> rng_draw(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  if (!(scale > 0.0)) throw ParameterError("rng_draw: scale must be positive");
  BasicMatrix<Real> m(rows, cols);
  for (auto& v : m.values()) v = static_cast<Real>(rng.uniform(-scale, scale));
  return m;
}

template BasicMatrix<float> rng_draw(Rng&, std::size_t, std::size_t, double);
template BasicMatrix<double> rng_draw(Rng&, std::size_t, std::size_t, double);

}  // namespace bitext::num
