#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bitext/nmt/model.hpp"

namespace bitext::sim {

enum class Pooling { sum, mean };

Pooling pooling_from_string(const std::string& s);
std::string to_string(Pooling p);

struct SentenceEmbedding {
  std::vector<double> vector;  // 2d
  std::string id;
  std::string language;
  std::string target_tag;
  std::string checkpoint;
};

// Column-wise sum (or mean) of the context rows. Throws EmptyInputError for
// an empty matrix and EvaluationError if any entry comes out non-finite.
template <typename Real>
SentenceEmbedding sentence_embedding(const nmt::ContextMatrixT<Real>& ctx,
                                     Pooling pooling = Pooling::sum);

// Throws UndefinedSimilarityError when either vector has zero norm and
// DimensionError on a length mismatch.
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(const SentenceEmbedding& a, const SentenceEmbedding& b);

template <typename Real>
SentenceEmbedding embed_sentence(const nmt::NmtModel<Real>& model, std::string_view text,
                                 const std::string& source_lang, const std::string& target_tag,
                                 Pooling pooling = Pooling::sum);

// Cosine between the embeddings of one source sentence encoded under two
// different target tags. Throws ConfigError for a tag the vocabulary lacks.
template <typename Real>
double tag_pair_similarity(const nmt::NmtModel<Real>& model, std::string_view sentence,
                           const std::string& lang,
                           const std::pair<std::string, std::string>& tags,
                           Pooling pooling = Pooling::sum);

}  // namespace bitext::sim
