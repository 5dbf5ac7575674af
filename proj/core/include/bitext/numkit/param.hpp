#pragma once

#include <span>
#include <string>

#include "bitext/numkit/matrix.hpp"

namespace bitext::num {

// A trainable matrix together with its gradient and Adadelta accumulators.
template <typename Real>
struct Param {
  Param() = default;
  Param(std::string param_name, std::size_t rows, std::size_t cols)
      : name(std::move(param_name)),
        value(rows, cols),
        grad(rows, cols),
        mean_sq_grad(rows, cols),
        mean_sq_update(rows, cols) {}

  std::string name;
  BasicMatrix<Real> value;
  BasicMatrix<Real> grad;
  BasicMatrix<Real> mean_sq_grad;    // E[g^2]
  BasicMatrix<Real> mean_sq_update;  // E[dx^2]

  void zero_grad() { grad.fill(Real(0)); }
};

struct AdadeltaConfig {
  double rho = 0.95;
  double eps = 1e-6;
  double lr = 1e-4;
};

// One Adadelta update, scaled by cfg.lr, applied in place. Zeroes the gradient.
// Throws DivergenceError on a non-finite gradient entry.
template <typename Real>
void adadelta_step(Param<Real>& p, const AdadeltaConfig& cfg);

// Rescales all gradients so their joint L2 norm is at most max_norm.
// Returns the norm before clipping.
template <typename Real>
double clip_global_norm(std::span<Param<Real>* const> params, double max_norm);

extern template struct Param<float>;
extern template struct Param<double>;

}  // namespace bitext::num
