#pragma once

#include <string_view>

#include "bitext/textproc/tokenizer.hpp"

namespace bitext::feat {

// Cosine of term-frequency profiles over all character 2..5-grams of the
// surface-normalised strings with whitespace removed. 0 if either profile is
// empty.
double char_ngram_similarity(std::string_view s, std::string_view t);

// Tokens are surface-normalised; those shorter than four characters are
// dropped unless they contain a non-alphabetic character; survivors are cut
// to four characters. Cosine of the resulting prefix counts, 0 if either side
// ends up empty.
double pseudo_cognate_similarity(const text::TokenSeq& s, const text::TokenSeq& t);
double pseudo_cognate_similarity(std::string_view s, std::string_view t);

struct Counts {
  std::size_t src_tokens = 0;
  std::size_t tgt_tokens = 0;
  std::size_t src_chars = 0;
  std::size_t tgt_chars = 0;
  friend bool operator==(const Counts&, const Counts&) = default;
};

// Code points excluding line breaks.
std::size_t char_length(std::string_view s);

Counts count_features(std::string_view s, std::string_view t);

}  // namespace bitext::feat
