#pragma once

// Forward and reverse-mode passes over the fixed encoder-decoder graph.
// Internal to the nmt module.

#include <span>
#include <vector>

#include "bitext/nmt/model.hpp"

namespace bitext::nmt::detail {

template <typename Real>
using Vec = std::vector<Real>;

// Per-step GRU activations kept for the backward pass.
template <typename Real>
struct GruTrace {
  num::BasicMatrix<Real> z, r, c, h;  // steps x d

  GruTrace() = default;
  GruTrace(std::size_t steps, std::size_t d) : z(steps, d), r(steps, d), c(steps, d), h(steps, d) {}
};

template <typename Real>
void gru_forward(const GruParams<Real>& p, std::span<const Real> x, std::span<const Real> h_prev,
                 std::span<Real> z, std::span<Real> r, std::span<Real> c, std::span<Real> h);

// Accumulates parameter gradients into p.*.grad, input gradient into dx and
// previous-state gradient into dh_prev.
template <typename Real>
void gru_backward(GruParams<Real>& p, std::span<const Real> x, std::span<const Real> h_prev,
                  std::span<const Real> z, std::span<const Real> r, std::span<const Real> c,
                  std::span<const Real> dh, std::span<Real> dx, std::span<Real> dh_prev);

template <typename Real>
struct EncoderTrace {
  std::vector<TokenId> ids;
  num::BasicMatrix<Real> ctx;  // n x 2d
  GruTrace<Real> fwd;
  GruTrace<Real> bwd;
};

template <typename Real>
EncoderTrace<Real> encoder_forward(const NmtModel<Real>& m, std::span<const TokenId> ids);

// dctx: n x 2d gradient with respect to the context rows.
template <typename Real>
void encoder_backward(NmtModel<Real>& m, const EncoderTrace<Real>& t,
                      const num::BasicMatrix<Real>& dctx);

// Teacher-forced loss of one pair: sum over target tokens of -log p(y_j).
// When `grad_scale` is nonzero the gradients of grad_scale * loss are
// accumulated into the model's Params.
template <typename Real>
double sentence_loss(NmtModel<Real>& m, std::span<const TokenId> source,
                     std::span<const TokenId> target, Real grad_scale);

template <typename Real>
double sentence_loss_no_grad(const NmtModel<Real>& m, std::span<const TokenId> source,
                             std::span<const TokenId> target);

}  // namespace bitext::nmt::detail
