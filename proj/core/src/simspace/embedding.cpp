#include "bitext/simspace/embedding.hpp"

#include <algorithm>
#include <cmath>

namespace bitext::sim {

Pooling pooling_from_string(const std::string& s) {
  if (s == "sum") return Pooling::sum;
  if (s == "mean") return Pooling::mean;
  throw ConfigError("unknown pooling '" + s + "' (expected sum or mean)");
}

std::string to_string(Pooling p) { return p == Pooling::sum ? "sum" : "mean"; }

template <typename Real>
SentenceEmbedding sentence_embedding(const nmt::ContextMatrixT<Real>& ctx, Pooling pooling) {
  const auto& s = ctx.states;
  if (s.rows() == 0 || s.cols() == 0) throw EmptyInputError("sentence_embedding: empty context matrix");
  SentenceEmbedding out;
  out.vector.assign(s.cols(), 0.0);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    auto r = s.row(i);
    for (std::size_t j = 0; j < s.cols(); ++j) out.vector[j] += static_cast<double>(r[j]);
  }
  if (pooling == Pooling::mean) {
    for (auto& v : out.vector) v /= static_cast<double>(s.rows());
  }
  for (double v : out.vector) {
    if (!std::isfinite(v)) throw EvaluationError("sentence_embedding: non-finite component");
  }
  out.language = ctx.source_lang;
  out.target_tag = ctx.target_tag.value_or("");
  return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("cosine: vectors of length " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) throw UndefinedSimilarityError("cosine: zero vector");
  const double c = ab / (std::sqrt(aa) * std::sqrt(bb));
  return std::clamp(c, -1.0, 1.0);
}

double cosine(const SentenceEmbedding& a, const SentenceEmbedding& b) {
  try {
    return cosine(std::span<const double>(a.vector), std::span<const double>(b.vector));
  } catch (const UndefinedSimilarityError&) {
    throw UndefinedSimilarityError("cosine: zero embedding in pair ('" + a.id + "', '" + b.id + "')");
  }
}

template <typename Real>
SentenceEmbedding embed_sentence(const nmt::NmtModel<Real>& model, std::string_view text,
                                 const std::string& source_lang, const std::string& target_tag,
                                 Pooling pooling) {
  return sentence_embedding(nmt::extract_context(model, text, source_lang, target_tag), pooling);
}

template <typename Real>
double tag_pair_similarity(const nmt::NmtModel<Real>& model, std::string_view sentence,
                           const std::string& lang,
                           const std::pair<std::string, std::string>& tags, Pooling pooling) {
  model.vocab().tag_id(tags.first);
  model.vocab().tag_id(tags.second);
  const auto a = embed_sentence(model, sentence, lang, tags.first, pooling);
  if (tags.first == tags.second) return cosine(a, a);
  return cosine(a, embed_sentence(model, sentence, lang, tags.second, pooling));
}

#define BITEXT_SIM_INSTANTIATE(R)                                                                  \
  template SentenceEmbedding sentence_embedding(const nmt::ContextMatrixT<R>&, Pooling);           \
  template SentenceEmbedding embed_sentence(const nmt::NmtModel<R>&, std::string_view,             \
                                            const std::string&, const std::string&, Pooling);      \
  template double tag_pair_similarity(const nmt::NmtModel<R>&, std::string_view,                   \
                                      const std::string&,                                          \
                                      const std::pair<std::string, std::string>&, Pooling);

BITEXT_SIM_INSTANTIATE(float)
BITEXT_SIM_INSTANTIATE(double)
#undef BITEXT_SIM_INSTANTIATE

}  // namespace bitext::sim
