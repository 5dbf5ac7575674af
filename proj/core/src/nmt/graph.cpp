#include "graph.hpp"

#include <cmath>

#include "bitext/numkit/kernels.hpp"

namespace bitext::nmt::detail {

namespace k = num::kernels;
using num::BasicMatrix;

namespace {

template <typename Real>
std::span<const Real> row_of(const BasicMatrix<Real>& m, std::size_t r) {
  return m.row(r);
}

template <typename Real>
void check_ids(const NmtModel<Real>& m, std::span<const TokenId> ids) {
  const auto v = static_cast<TokenId>(m.dims().vocab);
  for (TokenId id : ids) {
    if (id < 0 || id >= v) {
      throw VocabularyError("token id " + std::to_string(id) + " out of range [0, " +
                            std::to_string(v) + ")");
    }
  }
}

}  // namespace

template <typename Real>
void gru_forward(const GruParams<Real>& p, std::span<const Real> x, std::span<const Real> h_prev,
                 std::span<Real> z, std::span<Real> r, std::span<Real> c, std::span<Real> h) {
  const std::size_t d = h_prev.size();
  Vec<Real> pre(p.b.value.values().begin(), p.b.value.values().end());  // 3d
  k::vec_mat(x, p.w.value, std::span<Real>(pre));
  Vec<Real> hu(2 * d, Real(0));
  k::vec_mat(h_prev, p.u.value, std::span<Real>(hu));
  for (std::size_t i = 0; i < d; ++i) {
    z[i] = num::sigmoid(pre[i] + hu[i]);
    r[i] = num::sigmoid(pre[d + i] + hu[d + i]);
  }
  Vec<Real> rh(d);
  for (std::size_t i = 0; i < d; ++i) rh[i] = r[i] * h_prev[i];
  std::span<Real> pre_c(pre.data() + 2 * d, d);
  k::vec_mat(std::span<const Real>(rh), p.uc.value, pre_c);
  for (std::size_t i = 0; i < d; ++i) {
    c[i] = std::tanh(pre_c[i]);
    h[i] = (Real(1) - z[i]) * h_prev[i] + z[i] * c[i];
  }
}

template <typename Real>
void gru_backward(GruParams<Real>& p, std::span<const Real> x, std::span<const Real> h_prev,
                  std::span<const Real> z, std::span<const Real> r, std::span<const Real> c,
                  std::span<const Real> dh, std::span<Real> dx, std::span<Real> dh_prev) {
  const std::size_t d = h_prev.size();
  Vec<Real> dpre(3 * d);  // [dz_pre | dr_pre | dc_pre]
  for (std::size_t i = 0; i < d; ++i) {
    const Real dz = dh[i] * (c[i] - h_prev[i]);
    const Real dc = dh[i] * z[i];
    dh_prev[i] += dh[i] * (Real(1) - z[i]);
    dpre[i] = dz * z[i] * (Real(1) - z[i]);
    dpre[2 * d + i] = dc * (Real(1) - c[i] * c[i]);
  }
  std::span<const Real> dpc(dpre.data() + 2 * d, d);

  Vec<Real> rh(d);
  for (std::size_t i = 0; i < d; ++i) rh[i] = r[i] * h_prev[i];
  Vec<Real> drh(d, Real(0));
  k::mat_vec(p.uc.value, dpc, std::span<Real>(drh));
  k::outer(std::span<const Real>(rh), dpc, p.uc.grad);
  for (std::size_t i = 0; i < d; ++i) {
    const Real dr = drh[i] * h_prev[i];
    dh_prev[i] += drh[i] * r[i];
    dpre[d + i] = dr * r[i] * (Real(1) - r[i]);
  }

  const std::span<const Real> dpre_all(dpre);
  k::axpy(3 * d, Real(1), dpre.data(), p.b.grad.data());
  k::outer(x, dpre_all, p.w.grad);
  k::mat_vec(p.w.value, dpre_all, dx);
  const std::span<const Real> dpre_zr(dpre.data(), 2 * d);
  k::outer(h_prev, dpre_zr, p.u.grad);
  k::mat_vec(p.u.value, dpre_zr, dh_prev);
}

template <typename Real>
EncoderTrace<Real> encoder_forward(const NmtModel<Real>& m, std::span<const TokenId> ids) {
  if (ids.empty()) throw EmptyInputError("encode_source: empty source sequence");
  check_ids(m, ids);
  const std::size_t n = ids.size();
  const std::size_t d = m.dims().hidden;
  EncoderTrace<Real> t;
  t.ids.assign(ids.begin(), ids.end());
  t.ctx = BasicMatrix<Real>(n, 2 * d);
  t.fwd = GruTrace<Real>(n, d);
  t.bwd = GruTrace<Real>(n, d);
  const Vec<Real> zero(d, Real(0));

  for (std::size_t i = 0; i < n; ++i) {
    auto x = m.src_embed.value.row(static_cast<std::size_t>(ids[i]));
    std::span<const Real> prev = i == 0 ? std::span<const Real>(zero) : row_of(t.fwd.h, i - 1);
    gru_forward(m.enc_fwd, x, prev, t.fwd.z.row(i), t.fwd.r.row(i), t.fwd.c.row(i), t.fwd.h.row(i));
  }
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t i = n - 1 - step;
    auto x = m.src_embed.value.row(static_cast<std::size_t>(ids[i]));
    std::span<const Real> prev = i == n - 1 ? std::span<const Real>(zero) : row_of(t.bwd.h, i + 1);
    gru_forward(m.enc_bwd, x, prev, t.bwd.z.row(i), t.bwd.r.row(i), t.bwd.c.row(i), t.bwd.h.row(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto out = t.ctx.row(i);
    auto b = t.bwd.h.row(i);
    auto f = t.fwd.h.row(i);
    std::copy(b.begin(), b.end(), out.begin());
    std::copy(f.begin(), f.end(), out.begin() + static_cast<std::ptrdiff_t>(d));
  }
  return t;
}

template <typename Real>
void encoder_backward(NmtModel<Real>& m, const EncoderTrace<Real>& t,
                      const BasicMatrix<Real>& dctx) {
  const std::size_t n = t.ids.size();
  const std::size_t d = m.dims().hidden;
  const std::size_t e = m.dims().embed;
  const Vec<Real> zero(d, Real(0));
  Vec<Real> carry(d, Real(0));
  Vec<Real> dh(d);
  Vec<Real> dx(e);

  // Forward GRU ran left to right; unwind right to left.
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t i = n - 1 - step;
    for (std::size_t j = 0; j < d; ++j) dh[j] = dctx(i, d + j) + carry[j];
    std::fill(carry.begin(), carry.end(), Real(0));
    std::fill(dx.begin(), dx.end(), Real(0));
    std::span<const Real> x = m.src_embed.value.row(static_cast<std::size_t>(t.ids[i]));
    std::span<const Real> prev = i == 0 ? std::span<const Real>(zero) : row_of(t.fwd.h, i - 1);
    gru_backward(m.enc_fwd, x, prev, row_of(t.fwd.z, i), row_of(t.fwd.r, i), row_of(t.fwd.c, i),
                 std::span<const Real>(dh), std::span<Real>(dx), std::span<Real>(carry));
    k::axpy(e, Real(1), dx.data(), m.src_embed.grad.row(static_cast<std::size_t>(t.ids[i])).data());
  }

  std::fill(carry.begin(), carry.end(), Real(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) dh[j] = dctx(i, j) + carry[j];
    std::fill(carry.begin(), carry.end(), Real(0));
    std::fill(dx.begin(), dx.end(), Real(0));
    std::span<const Real> x = m.src_embed.value.row(static_cast<std::size_t>(t.ids[i]));
    std::span<const Real> prev = i == n - 1 ? std::span<const Real>(zero) : row_of(t.bwd.h, i + 1);
    gru_backward(m.enc_bwd, x, prev, row_of(t.bwd.z, i), row_of(t.bwd.r, i), row_of(t.bwd.c, i),
                 std::span<const Real>(dh), std::span<Real>(dx), std::span<Real>(carry));
    k::axpy(e, Real(1), dx.data(), m.src_embed.grad.row(static_cast<std::size_t>(t.ids[i])).data());
  }
}

namespace {

// Everything the decoder computes for one teacher-forced target sequence.
template <typename Real>
struct DecoderTrace {
  std::size_t steps = 0;
  Vec<Real> mean_h;              // 2d
  Vec<Real> z0;                  // d
  BasicMatrix<Real> uh;          // n x d  (h_i U_a)
  BasicMatrix<Real> att_e;       // (steps * n) x d  tanh activations
  BasicMatrix<Real> alpha;       // steps x n
  BasicMatrix<Real> x_in;        // steps x (e + 2d)  [t ; q]
  GruTrace<Real> gru;            // steps x d
  BasicMatrix<Real> readout;     // steps x e
  BasicMatrix<Real> prob;        // steps x V
  std::vector<TokenId> y_prev;
};

template <typename Real>
void attention_forward(const NmtModel<Real>& m, std::span<const Real> z_prev,
                       const BasicMatrix<Real>& ctx, const BasicMatrix<Real>& uh,
                       std::span<Real> e_out /* n*d */, std::span<Real> alpha,
                       std::span<Real> q) {
  const std::size_t n = ctx.rows();
  const std::size_t d = m.dims().hidden;
  Vec<Real> wz(d, Real(0));
  k::vec_mat(z_prev, m.att_w.value, std::span<Real>(wz));
  const Real* va = m.att_v.value.data();
  for (std::size_t i = 0; i < n; ++i) {
    Real* ei = e_out.data() + i * d;
    const Real* ui = uh.data() + i * d;
    Real score = 0;
    for (std::size_t j = 0; j < d; ++j) {
      ei[j] = std::tanh(wz[j] + ui[j]);
      score += va[j] * ei[j];
    }
    alpha[i] = score;
  }
  num::softmax_inplace(alpha);
  std::fill(q.begin(), q.end(), Real(0));
  for (std::size_t i = 0; i < n; ++i) k::axpy(ctx.cols(), alpha[i], ctx.data() + i * ctx.cols(), q.data());
}

template <typename Real>
BasicMatrix<Real> project_contexts(const NmtModel<Real>& m, const BasicMatrix<Real>& ctx) {
  BasicMatrix<Real> uh(ctx.rows(), m.dims().hidden);
  for (std::size_t i = 0; i < ctx.rows(); ++i) k::vec_mat(ctx.row(i), m.att_u.value, uh.row(i));
  return uh;
}

template <typename Real>
Vec<Real> mean_rows(const BasicMatrix<Real>& ctx) {
  Vec<Real> mean(ctx.cols(), Real(0));
  for (std::size_t i = 0; i < ctx.rows(); ++i) k::axpy(ctx.cols(), Real(1), ctx.data() + i * ctx.cols(), mean.data());
  const Real inv = Real(1) / static_cast<Real>(ctx.rows());
  for (auto& v : mean) v *= inv;
  return mean;
}

template <typename Real>
Vec<Real> init_state(const NmtModel<Real>& m, std::span<const Real> mean_h) {
  Vec<Real> z0(m.init_b.value.values().begin(), m.init_b.value.values().end());
  k::vec_mat(mean_h, m.init_w.value, std::span<Real>(z0));
  for (auto& v : z0) v = std::tanh(v);
  return z0;
}

// One decoder step given z_prev, y_prev and the projected contexts.
template <typename Real>
void decoder_forward_step(const NmtModel<Real>& m, std::span<const Real> z_prev, TokenId y_prev,
                          const BasicMatrix<Real>& ctx, const BasicMatrix<Real>& uh,
                          std::span<Real> att_e, std::span<Real> alpha, std::span<Real> x_in,
                          std::span<Real> gz, std::span<Real> gr, std::span<Real> gc,
                          std::span<Real> z_next, std::span<Real> readout, std::span<Real> prob) {
  const std::size_t e = m.dims().embed;
  const std::size_t c2 = m.dims().context();
  auto t = m.tgt_embed.value.row(static_cast<std::size_t>(y_prev));
  std::copy(t.begin(), t.end(), x_in.begin());
  std::span<Real> q(x_in.data() + e, c2);
  attention_forward(m, z_prev, ctx, uh, att_e, alpha, q);
  gru_forward(m.dec, std::span<const Real>(x_in), z_prev, gz, gr, gc, z_next);

  auto pb = m.out_pb.value.values();
  std::copy(pb.begin(), pb.end(), readout.begin());
  k::vec_mat(std::span<const Real>(z_next), m.out_p1.value, readout);
  k::vec_mat(std::span<const Real>(t), m.out_p2.value, readout);
  k::vec_mat(std::span<const Real>(q), m.out_p3.value, readout);
  for (auto& v : readout) v = std::tanh(v);

  auto ob = m.out_b.value.values();
  std::copy(ob.begin(), ob.end(), prob.begin());
  k::vec_mat(std::span<const Real>(readout), m.out_w.value, prob);
  num::softmax_inplace(prob);
}

template <typename Real>
DecoderTrace<Real> decoder_forward(const NmtModel<Real>& m, const BasicMatrix<Real>& ctx,
                                   std::span<const TokenId> target) {
  const std::size_t n = ctx.rows();
  const std::size_t d = m.dims().hidden;
  const std::size_t e = m.dims().embed;
  const std::size_t c2 = m.dims().context();
  const std::size_t steps = target.size();
  DecoderTrace<Real> tr;
  tr.steps = steps;
  tr.mean_h = mean_rows(ctx);
  tr.z0 = init_state(m, std::span<const Real>(tr.mean_h));
  tr.uh = project_contexts(m, ctx);
  tr.att_e = BasicMatrix<Real>(steps * n, d);
  tr.alpha = BasicMatrix<Real>(steps, n);
  tr.x_in = BasicMatrix<Real>(steps, e + c2);
  tr.gru = GruTrace<Real>(steps, d);
  tr.readout = BasicMatrix<Real>(steps, e);
  tr.prob = BasicMatrix<Real>(steps, m.dims().vocab);
  tr.y_prev.resize(steps);

  for (std::size_t j = 0; j < steps; ++j) {
    tr.y_prev[j] = j == 0 ? m.vocab().eos_id() : target[j - 1];
    std::span<const Real> z_prev = j == 0 ? std::span<const Real>(tr.z0) : row_of(tr.gru.h, j - 1);
    decoder_forward_step(m, z_prev, tr.y_prev[j], ctx, tr.uh,
                         std::span<Real>(tr.att_e.data() + j * n * d, n * d), tr.alpha.row(j),
                         tr.x_in.row(j), tr.gru.z.row(j), tr.gru.r.row(j), tr.gru.c.row(j),
                         tr.gru.h.row(j), tr.readout.row(j), tr.prob.row(j));
  }
  return tr;
}

template <typename Real>
double nll(const DecoderTrace<Real>& tr, std::span<const TokenId> target) {
  double loss = 0.0;
  for (std::size_t j = 0; j < tr.steps; ++j) {
    loss -= std::log(static_cast<double>(tr.prob(j, static_cast<std::size_t>(target[j]))));
  }
  return loss;
}

}  // namespace

template <typename Real>
double sentence_loss_no_grad(const NmtModel<Real>& m, std::span<const TokenId> source,
                             std::span<const TokenId> target) {
  check_ids(m, target);
  const auto enc = encoder_forward(m, source);
  const auto tr = decoder_forward(m, enc.ctx, target);
  return nll(tr, target);
}

template <typename Real>
double sentence_loss(NmtModel<Real>& m, std::span<const TokenId> source,
                     std::span<const TokenId> target, Real grad_scale) {
  check_ids(m, target);
  const auto enc = encoder_forward(m, source);
  const auto tr = decoder_forward(m, enc.ctx, target);
  const double loss = nll(tr, target);
  if (grad_scale == Real(0)) return loss;

  const std::size_t n = enc.ctx.rows();
  const std::size_t d = m.dims().hidden;
  const std::size_t e = m.dims().embed;
  const std::size_t c2 = m.dims().context();
  const std::size_t vsize = m.dims().vocab;
  const BasicMatrix<Real>& ctx = enc.ctx;

  BasicMatrix<Real> dctx(n, c2);
  BasicMatrix<Real> duh(n, d);
  Vec<Real> dz(d, Real(0));  // gradient flowing into z_j from step j+1
  Vec<Real> dlogits(vsize), dread(e), dx(e + c2), dz_prev(d), dwz(d);
  Vec<Real> dalpha(n), da(n);

  for (std::size_t step = 0; step < tr.steps; ++step) {
    const std::size_t j = tr.steps - 1 - step;
    std::span<const Real> z_prev = j == 0 ? std::span<const Real>(tr.z0) : row_of(tr.gru.h, j - 1);
    auto z_j = row_of(tr.gru.h, j);
    auto x_in = row_of(tr.x_in, j);
    std::span<const Real> t(x_in.data(), e);
    std::span<const Real> q(x_in.data() + e, c2);
    auto readout = row_of(tr.readout, j);
    auto prob = row_of(tr.prob, j);

    // softmax + NLL
    for (std::size_t v = 0; v < vsize; ++v) dlogits[v] = prob[v] * grad_scale;
    dlogits[static_cast<std::size_t>(target[j])] -= grad_scale;
    k::axpy(vsize, Real(1), dlogits.data(), m.out_b.grad.data());
    k::outer(readout, std::span<const Real>(dlogits), m.out_w.grad);
    std::fill(dread.begin(), dread.end(), Real(0));
    k::mat_vec(m.out_w.value, std::span<const Real>(dlogits), std::span<Real>(dread));
    for (std::size_t i = 0; i < e; ++i) dread[i] *= Real(1) - readout[i] * readout[i];
    const std::span<const Real> dpre(dread);

    // readout = tanh(z_j P1 + t P2 + q P3 + pb)
    k::axpy(e, Real(1), dread.data(), m.out_pb.grad.data());
    k::outer(z_j, dpre, m.out_p1.grad);
    k::mat_vec(m.out_p1.value, dpre, std::span<Real>(dz));
    std::fill(dx.begin(), dx.end(), Real(0));
    std::span<Real> dt(dx.data(), e);
    std::span<Real> dq(dx.data() + e, c2);
    k::outer(t, dpre, m.out_p2.grad);
    k::mat_vec(m.out_p2.value, dpre, dt);
    k::outer(q, dpre, m.out_p3.grad);
    k::mat_vec(m.out_p3.value, dpre, dq);

    // decoder GRU
    std::fill(dz_prev.begin(), dz_prev.end(), Real(0));
    gru_backward(m.dec, x_in, z_prev, row_of(tr.gru.z, j), row_of(tr.gru.r, j), row_of(tr.gru.c, j),
                 std::span<const Real>(dz), std::span<Real>(dx), std::span<Real>(dz_prev));

    // t_{j-1} = W_y[y_{j-1}]
    k::axpy(e, Real(1), dt.data(), m.tgt_embed.grad.row(static_cast<std::size_t>(tr.y_prev[j])).data());

    // attention: q = sum_i alpha_i h_i, alpha = softmax(v . tanh(z W_a + h_i U_a))
    auto alpha = row_of(tr.alpha, j);
    Real weighted = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dalpha[i] = k::dot(c2, ctx.data() + i * c2, dq.data());
      k::axpy(c2, alpha[i], dq.data(), dctx.data() + i * c2);
      weighted += alpha[i] * dalpha[i];
    }
    std::fill(dwz.begin(), dwz.end(), Real(0));
    const Real* va = m.att_v.value.data();
    Real* dva = m.att_v.grad.data();
    for (std::size_t i = 0; i < n; ++i) {
      da[i] = alpha[i] * (dalpha[i] - weighted);
      const Real* ei = tr.att_e.data() + (j * n + i) * d;
      Real* dui = duh.data() + i * d;
      for (std::size_t a = 0; a < d; ++a) {
        dva[a] += da[i] * ei[a];
        const Real dp = da[i] * va[a] * (Real(1) - ei[a] * ei[a]);
        dui[a] += dp;
        dwz[a] += dp;
      }
    }
    k::outer(z_prev, std::span<const Real>(dwz), m.att_w.grad);
    k::mat_vec(m.att_w.value, std::span<const Real>(dwz), std::span<Real>(dz_prev));

    std::swap(dz, dz_prev);
  }

  // z_0 = tanh(mean_h W_init + b_init); dz now holds dL/dz_0
  for (std::size_t a = 0; a < d; ++a) dz[a] *= Real(1) - tr.z0[a] * tr.z0[a];
  k::axpy(d, Real(1), dz.data(), m.init_b.grad.data());
  k::outer(std::span<const Real>(tr.mean_h), std::span<const Real>(dz), m.init_w.grad);
  Vec<Real> dmean(c2, Real(0));
  k::mat_vec(m.init_w.value, std::span<const Real>(dz), std::span<Real>(dmean));
  const Real inv_n = Real(1) / static_cast<Real>(n);
  for (std::size_t i = 0; i < n; ++i) {
    k::axpy(c2, inv_n, dmean.data(), dctx.data() + i * c2);
    // uh_i = h_i U_a
    k::outer(row_of(ctx, i), row_of(duh, i), m.att_u.grad);
    k::mat_vec(m.att_u.value, row_of(duh, i), dctx.row(i));
  }

  encoder_backward(m, enc, dctx);
  return loss;
}

// ---- public single-step API -------------------------------------------------

}  // namespace bitext::nmt::detail

namespace bitext::nmt {

template <typename Real>
ContextMatrixT<Real> encode_source(const NmtModel<Real>& model, std::span<const TokenId> ids) {
  auto t = detail::encoder_forward(model, ids);
  ContextMatrixT<Real> out;
  out.states = std::move(t.ctx);
  out.source_ids = std::move(t.ids);
  return out;
}

template <typename Real>
std::vector<Real> initial_decoder_state(const NmtModel<Real>& model, const ContextMatrixT<Real>& ctx) {
  if (ctx.states.rows() == 0) throw EmptyInputError("initial_decoder_state: empty context");
  const auto mean = detail::mean_rows(ctx.states);
  return detail::init_state(model, std::span<const Real>(mean));
}

template <typename Real>
AttentionResult<Real> attention_step(const NmtModel<Real>& model, std::span<const Real> z_prev,
                                     const ContextMatrixT<Real>& ctx) {
  const std::size_t n = ctx.states.rows();
  const std::size_t d = model.dims().hidden;
  if (n == 0) throw EmptyInputError("attention_step: empty context");
  if (z_prev.size() != d || ctx.states.cols() != model.dims().context()) {
    throw DimensionError("attention_step: state or context width does not match the model");
  }
  const auto uh = detail::project_contexts(model, ctx.states);
  std::vector<Real> e(n * d);
  AttentionResult<Real> out;
  out.alpha.resize(n);
  out.q.resize(model.dims().context());
  detail::attention_forward(model, z_prev, ctx.states, uh, std::span<Real>(e),
                            std::span<Real>(out.alpha), std::span<Real>(out.q));
  return out;
}

template <typename Real>
DecoderOutput<Real> decoder_step(const NmtModel<Real>& model, std::span<const Real> z_prev,
                                 TokenId y_prev, const ContextMatrixT<Real>& ctx) {
  const std::size_t n = ctx.states.rows();
  const std::size_t d = model.dims().hidden;
  if (n == 0) throw EmptyInputError("decoder_step: empty context");
  if (z_prev.size() != d || ctx.states.cols() != model.dims().context()) {
    throw DimensionError("decoder_step: state or context width does not match the model");
  }
  const TokenId ids[1] = {y_prev};
  detail::check_ids(model, std::span<const TokenId>(ids));
  const auto uh = detail::project_contexts(model, ctx.states);
  std::vector<Real> e(n * d), alpha(n), x_in(model.dims().embed + model.dims().context());
  std::vector<Real> gz(d), gr(d), gc(d), readout(model.dims().embed);
  DecoderOutput<Real> out;
  out.z.resize(d);
  out.dist.resize(model.dims().vocab);
  detail::decoder_forward_step(model, z_prev, y_prev, ctx.states, uh, std::span<Real>(e),
                               std::span<Real>(alpha), std::span<Real>(x_in), std::span<Real>(gz),
                               std::span<Real>(gr), std::span<Real>(gc), std::span<Real>(out.z),
                               std::span<Real>(readout), std::span<Real>(out.dist));
  return out;
}

template <typename Real>
std::vector<std::string> greedy_translate(const NmtModel<Real>& model,
                                          std::span<const TokenId> source_ids, std::size_t max_len) {
  std::vector<std::string> out;
  if (max_len == 0) return out;
  const auto ctx = encode_source(model, source_ids);
  std::vector<Real> z = initial_decoder_state(model, ctx);
  TokenId prev = model.vocab().eos_id();
  while (out.size() < max_len) {
    auto step = decoder_step(model, std::span<const Real>(z), prev, ctx);
    const auto best = static_cast<TokenId>(
        std::max_element(step.dist.begin(), step.dist.end()) - step.dist.begin());
    if (best == model.vocab().eos_id()) break;
    out.push_back(model.vocab().token(best));
    z = std::move(step.z);
    prev = best;
  }
  return out;
}

template <typename Real>
std::vector<TokenId> prepare_source(const NmtModel<Real>& model, std::string_view text,
                                    const std::string& target_lang, std::size_t max_len) {
  auto seq = text::bpe_apply(model.bpe(), text::tokenize(text));
  seq = text::truncate(std::move(seq), max_len);
  return text::encode(model.vocab(), seq, target_lang);
}

template <typename Real>
ContextMatrixT<Real> extract_context(const NmtModel<Real>& model, std::string_view text,
                                     const std::string& source_lang, const std::string& target_tag,
                                     std::size_t max_len) {
  const auto ids = prepare_source(model, text, target_tag, max_len);
  auto ctx = encode_source(model, std::span<const TokenId>(ids));
  ctx.source_lang = source_lang;
  ctx.target_tag = target_tag;
  return ctx;
}

#define BITEXT_NMT_INSTANTIATE(R)                                                                  \
  template ContextMatrixT<R> encode_source(const NmtModel<R>&, std::span<const TokenId>);          \
  template std::vector<R> initial_decoder_state(const NmtModel<R>&, const ContextMatrixT<R>&);     \
  template AttentionResult<R> attention_step(const NmtModel<R>&, std::span<const R>,               \
                                             const ContextMatrixT<R>&);                            \
  template DecoderOutput<R> decoder_step(const NmtModel<R>&, std::span<const R>, TokenId,          \
                                         const ContextMatrixT<R>&);                                \
  template std::vector<std::string> greedy_translate(const NmtModel<R>&, std::span<const TokenId>, \
                                                     std::size_t);                                 \
  template std::vector<TokenId> prepare_source(const NmtModel<R>&, std::string_view,               \
                                               const std::string&, std::size_t);                   \
  template ContextMatrixT<R> extract_context(const NmtModel<R>&, std::string_view,                 \
                                             const std::string&, const std::string&, std::size_t); \
  template double detail::sentence_loss(NmtModel<R>&, std::span<const TokenId>,                    \
                                        std::span<const TokenId>, R);                              \
  template double detail::sentence_loss_no_grad(const NmtModel<R>&, std::span<const TokenId>,      \
                                                std::span<const TokenId>);

BITEXT_NMT_INSTANTIATE(float)
BITEXT_NMT_INSTANTIATE(double)
#undef BITEXT_NMT_INSTANTIATE

}  // namespace bitext::nmt
