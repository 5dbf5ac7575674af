#include "bitext/textproc/tokenizer.hpp"

#include "bitext/textproc/unicode.hpp"

namespace bitext::text {

TokenSeq tokenize(std::string_view text, std::string language) {
  TokenSeq seq;
  seq.language = std::move(language);
  std::u32string current;
  auto flush = [&] {
    if (!current.empty()) {
      seq.tokens.push_back(to_utf8(current));
      current.clear();
    }
  };
  for (char32_t c : to_u32(text)) {
    if (is_space(c)) {
      flush();
    } else if (is_punct(c)) {
      flush();
      seq.tokens.push_back(to_utf8(std::u32string(1, c)));
    } else {
      current.push_back(c);
    }
  }
  flush();
  return seq;
}

std::string tag_token(std::string_view target_lang) {
  return "<2" + std::string(target_lang) + ">";
}

bool is_tag_token(std::string_view token) {
  return token.size() > 3 && token.starts_with("<2") && token.ends_with(">");
}

TokenSeq with_tag(TokenSeq seq, const std::string& target_lang) {
  if (seq.target_tag && !seq.tokens.empty()) seq.tokens.erase(seq.tokens.begin());
  seq.tokens.insert(seq.tokens.begin(), tag_token(target_lang));
  seq.target_tag = target_lang;
  return seq;
}

TokenSeq truncate(TokenSeq seq, std::size_t max_len) {
  if (seq.tokens.size() > max_len) seq.tokens.resize(max_len);
  if (seq.tokens.empty()) seq.target_tag.reset();
  return seq;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

}  // namespace bitext::text
