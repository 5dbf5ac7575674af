#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bitext::text {

inline constexpr std::size_t kDefaultMaxSentenceLength = 50;

struct TokenSeq {
  std::vector<std::string> tokens;
  std::string language;
  // When set, tokens[0] is the matching "<2xx>" tag token.
  std::optional<std::string> target_tag;

  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

// Whitespace split with every punctuation character emitted as its own token.
TokenSeq tokenize(std::string_view text, std::string language = {});

std::string tag_token(std::string_view target_lang);
bool is_tag_token(std::string_view token);

// Prepends the target-language tag (replacing an existing one).
TokenSeq with_tag(TokenSeq seq, const std::string& target_lang);

// Keeps at most max_len tokens (a leading tag counts).
TokenSeq truncate(TokenSeq seq, std::size_t max_len);

std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

}  // namespace bitext::text
