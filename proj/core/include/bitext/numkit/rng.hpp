#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include "bitext/numkit/matrix.hpp"

namespace bitext::num {

// Seeded generator with platform-independent draws. std::mt19937_64's output
// sequence is fixed by the standard; every conversion to reals, bounded
// integers and permutations is done here rather than through the
// implementation-defined <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1).
  double uniform();
  // Uniform in [lo, hi].
  double uniform(double lo, double hi);
  // Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller.
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Derives an independent stream for a named sub-task.
  Rng fork(std::uint64_t salt);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Matrix of values uniform in [-scale, +scale]. Throws ParameterError if
// scale is not positive.
template <typename Real>
BasicMatrix<Real> rng_draw(Rng& rng, std::size_t rows, std::size_t cols, double scale);

}  // namespace bitext::num
