#include "bitext/nmt/model.hpp"

#include <cmath>

namespace bitext::nmt {

namespace {

// fan_out is the width of one packed block (one gate), not the whole matrix.
template <typename Real>
void init_param(num::Param<Real>& p, const std::string& name, std::size_t rows, std::size_t cols,
                num::Rng& rng, double scale, std::size_t fan_out = 0) {
  if (scale <= 0.0) scale = std::sqrt(6.0 / static_cast<double>(rows + (fan_out ? fan_out : cols)));
  p = num::Param<Real>(name, rows, cols);
  p.value = num::rng_draw<Real>(rng, rows, cols, scale);
}

template <typename Real>
void init_gru(GruParams<Real>& g, const std::string& prefix, std::size_t in, std::size_t d,
              num::Rng& rng, double scale) {
  init_param(g.w, prefix + ".w", in, 3 * d, rng, scale, d);
  init_param(g.u, prefix + ".u", d, 2 * d, rng, scale, d);
  init_param(g.uc, prefix + ".uc", d, d, rng, scale);
  g.b = num::Param<Real>(prefix + ".b", 1, 3 * d);
}

}  // namespace

template <typename Real>
NmtModel<Real>::NmtModel(ModelDims dims, text::Vocabulary vocab, text::BpeModel bpe,
                         std::uint64_t seed, double init_scale)
    : dims_(dims), vocab_(std::move(vocab)), bpe_(std::move(bpe)), seed_(seed) {
  if (dims_.vocab == 0) dims_.vocab = vocab_.size();
  if (dims_.vocab != vocab_.size()) {
    throw DimensionError("model vocabulary size " + std::to_string(dims_.vocab) +
                         " does not match bound vocabulary of " + std::to_string(vocab_.size()));
  }
  if (dims_.embed == 0 || dims_.hidden == 0) throw ConfigError("model dimensions must be positive");

  const std::size_t e = dims_.embed, d = dims_.hidden, c = dims_.context(), v = dims_.vocab;
  num::Rng rng(seed);
  init_param(src_embed, "src_embed", v, e, rng, init_scale);
  init_param(tgt_embed, "tgt_embed", v, e, rng, init_scale);
  init_gru(enc_fwd, "enc_fwd", e, d, rng, init_scale);
  init_gru(enc_bwd, "enc_bwd", e, d, rng, init_scale);
  init_gru(dec, "dec", e + c, d, rng, init_scale);
  init_param(att_w, "att_w", d, d, rng, init_scale);
  init_param(att_u, "att_u", c, d, rng, init_scale);
  init_param(att_v, "att_v", 1, d, rng, init_scale);
  init_param(init_w, "init_w", c, d, rng, init_scale);
  init_b = num::Param<Real>("init_b", 1, d);
  init_param(out_p1, "out_p1", d, e, rng, init_scale);
  init_param(out_p2, "out_p2", e, e, rng, init_scale);
  init_param(out_p3, "out_p3", c, e, rng, init_scale);
  out_pb = num::Param<Real>("out_pb", 1, e);
  init_param(out_w, "out_w", e, v, rng, init_scale);
  out_b = num::Param<Real>("out_b", 1, v);
}

template <typename Real>
std::vector<num::Param<Real>*> NmtModel<Real>::params() {
  return {&src_embed, &tgt_embed,
          &enc_fwd.w, &enc_fwd.u, &enc_fwd.uc, &enc_fwd.b,
          &enc_bwd.w, &enc_bwd.u, &enc_bwd.uc, &enc_bwd.b,
          &dec.w,     &dec.u,     &dec.uc,     &dec.b,
          &att_w,     &att_u,     &att_v,
          &init_w,    &init_b,
          &out_p1,    &out_p2,    &out_p3,     &out_pb,
          &out_w,     &out_b};
}

template <typename Real>
std::vector<const num::Param<Real>*> NmtModel<Real>::params() const {
  auto* self = const_cast<NmtModel*>(this);
  const auto mutable_params = self->params();
  return {mutable_params.begin(), mutable_params.end()};
}

template <typename Real>
void NmtModel<Real>::zero_grad() {
  for (auto* p : params()) p->zero_grad();
}

template class NmtModel<float>;
template class NmtModel<double>;

}  // namespace bitext::nmt
