#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bitext/numkit/param.hpp"
#include "bitext/numkit/rng.hpp"
#include "bitext/textproc/bpe.hpp"
#include "bitext/textproc/vocabulary.hpp"

namespace bitext::nmt {

using text::TokenId;

struct ModelDims {
  std::size_t embed = 64;   // e: word embedding and readout size
  std::size_t hidden = 64;  // d: GRU state size; context vectors have 2d entries
  std::size_t vocab = 0;    // V: shared source/target vocabulary

  std::size_t context() const noexcept { return 2 * hidden; }
  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

// Standard GRU with the three input projections packed as [z | r | c]:
//   z = sigmoid(x Wz + h Uz + bz), r = sigmoid(x Wr + h Ur + br)
//   c = tanh(x Wc + (r * h) Uc + bc), h' = (1 - z) h + z c
template <typename Real>
struct GruParams {
  num::Param<Real> w;   // in x 3d
  num::Param<Real> u;   // d x 2d   ([Uz | Ur])
  num::Param<Real> uc;  // d x d
  num::Param<Real> b;   // 1 x 3d
};

// Bidirectional GRU encoder, additive attention and a GRU decoder over
// [t_{j-1}; q_j] with a tanh readout layer. Every matrix is stored
// input-major so that a row vector times the matrix gives the output.
template <typename Real>
class NmtModel {
 public:
  NmtModel() = default;
  // Weights drawn uniformly from [-s, s] with s = init_scale, or per matrix
  // s = sqrt(6 / (fan_in + fan_out)) when init_scale <= 0. Biases start at 0.
  NmtModel(ModelDims dims, text::Vocabulary vocab, text::BpeModel bpe, std::uint64_t seed,
           double init_scale = 0.0);

  const ModelDims& dims() const noexcept { return dims_; }
  const text::Vocabulary& vocab() const noexcept { return vocab_; }
  const text::BpeModel& bpe() const noexcept { return bpe_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::vector<num::Param<Real>*> params();
  std::vector<const num::Param<Real>*> params() const;
  void zero_grad();

  num::Param<Real> src_embed;  // V x e   (W_x)
  num::Param<Real> tgt_embed;  // V x e   (W_y)
  GruParams<Real> enc_fwd;     // in = e
  GruParams<Real> enc_bwd;     // in = e
  GruParams<Real> dec;         // in = e + 2d
  num::Param<Real> att_w;      // d x d   (W_a, applied to z_{j-1})
  num::Param<Real> att_u;      // 2d x d  (U_a, applied to h_i)
  num::Param<Real> att_v;      // 1 x d   (v_a)
  num::Param<Real> init_w;     // 2d x d
  num::Param<Real> init_b;     // 1 x d
  num::Param<Real> out_p1;     // d x e
  num::Param<Real> out_p2;     // e x e
  num::Param<Real> out_p3;     // 2d x e
  num::Param<Real> out_pb;     // 1 x e
  num::Param<Real> out_w;      // e x V   (W_o)
  num::Param<Real> out_b;      // 1 x V

 private:
  ModelDims dims_;
  text::Vocabulary vocab_;
  text::BpeModel bpe_;
  std::uint64_t seed_ = 0;
};

// Encoder output for one sentence: row i is [backward h_i ; forward h_i].
template <typename Real>
struct ContextMatrixT {
  num::BasicMatrix<Real> states;  // n x 2d
  std::vector<TokenId> source_ids;
  std::string source_lang;
  std::optional<std::string> target_tag;

  std::size_t length() const noexcept { return states.rows(); }
};

using ContextMatrix = ContextMatrixT<double>;

template <typename Real>
struct AttentionResult {
  std::vector<Real> alpha;  // one weight per source position
  std::vector<Real> q;      // weighted context, 2d
};

template <typename Real>
struct DecoderOutput {
  std::vector<Real> z;     // next decoder state, d
  std::vector<Real> dist;  // probability over the vocabulary, V
};

// Runs both encoder GRUs from zero initial states. Throws VocabularyError for
// an id outside the vocabulary and EmptyInputError for an empty sequence.
template <typename Real>
ContextMatrixT<Real> encode_source(const NmtModel<Real>& model, std::span<const TokenId> ids);

// z_0 = tanh(mean_i(h_i) W_init + b_init)
template <typename Real>
std::vector<Real> initial_decoder_state(const NmtModel<Real>& model, const ContextMatrixT<Real>& ctx);

template <typename Real>
AttentionResult<Real> attention_step(const NmtModel<Real>& model, std::span<const Real> z_prev,
                                     const ContextMatrixT<Real>& ctx);

template <typename Real>
DecoderOutput<Real> decoder_step(const NmtModel<Real>& model, std::span<const Real> z_prev,
                                 TokenId y_prev, const ContextMatrixT<Real>& ctx);

// Argmax decoding starting from <eos>, stopping at <eos> or max_len tokens.
// The returned list excludes the final <eos>.
template <typename Real>
std::vector<std::string> greedy_translate(const NmtModel<Real>& model,
                                          std::span<const TokenId> source_ids, std::size_t max_len);

// Source ids for raw text: tokenize, BPE-segment, truncate, tag, encode.
template <typename Real>
std::vector<TokenId> prepare_source(const NmtModel<Real>& model, std::string_view text,
                                    const std::string& target_lang,
                                    std::size_t max_len = text::kDefaultMaxSentenceLength);

template <typename Real>
ContextMatrixT<Real> extract_context(const NmtModel<Real>& model, std::string_view text,
                                     const std::string& source_lang, const std::string& target_tag,
                                     std::size_t max_len = text::kDefaultMaxSentenceLength);

extern template class NmtModel<float>;
extern template class NmtModel<double>;

}  // namespace bitext::nmt
