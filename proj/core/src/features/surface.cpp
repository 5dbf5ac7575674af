#include "bitext/features/surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bitext/textproc/unicode.hpp"

namespace bitext::feat {

namespace {

template <typename Key>
double count_cosine(const std::map<Key, double>& a, const std::map<Key, double>& b) {
  if (a.empty() || b.empty()) return 0.0;
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (const auto& [k, v] : a) {
    aa += v * v;
    if (auto it = b.find(k); it != b.end()) ab += v * it->second;
  }
  for (const auto& [k, v] : b) bb += v * v;
  return std::min(1.0, ab / (std::sqrt(aa) * std::sqrt(bb)));
}

std::map<std::u32string, double> ngram_profile(std::string_view s) {
  std::u32string chars;
  for (char32_t c : text::to_u32(text::normalize_for_surface(s))) {
    if (!text::is_space(c)) chars.push_back(c);
  }
  std::map<std::u32string, double> prof;
  for (std::size_t n = 2; n <= 5; ++n) {
    for (std::size_t i = 0; i + n <= chars.size(); ++i) prof[chars.substr(i, n)] += 1.0;
  }
  return prof;
}

std::map<std::u32string, double> cognate_profile(const text::TokenSeq& s) {
  std::map<std::u32string, double> prof;
  for (const auto& tok : s.tokens) {
    if (text::is_tag_token(tok)) continue;
    const auto w = text::to_u32(text::normalize_for_surface(tok));
    if (w.empty()) continue;
    bool non_alpha = false;
    for (char32_t c : w) non_alpha = non_alpha || !text::is_alpha(c);
    if (w.size() < 4 && !non_alpha) continue;
    prof[w.substr(0, 4)] += 1.0;
  }
  return prof;
}

}  // namespace

double char_ngram_similarity(std::string_view s, std::string_view t) {
  return count_cosine(ngram_profile(s), ngram_profile(t));
}

double pseudo_cognate_similarity(const text::TokenSeq& s, const text::TokenSeq& t) {
  return count_cosine(cognate_profile(s), cognate_profile(t));
}

double pseudo_cognate_similarity(std::string_view s, std::string_view t) {
  return pseudo_cognate_similarity(text::tokenize(s), text::tokenize(t));
}

std::size_t char_length(std::string_view s) {
  std::size_t n = 0;
  for (char32_t c : text::to_u32(s)) n += (c != U'\n' && c != U'\r');
  return n;
}

Counts count_features(std::string_view s, std::string_view t) {
  return Counts{text::tokenize(s).tokens.size(), text::tokenize(t).tokens.size(), char_length(s),
                char_length(t)};
}

}  // namespace bitext::feat
