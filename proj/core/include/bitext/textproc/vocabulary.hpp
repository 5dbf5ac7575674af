#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bitext/textproc/tokenizer.hpp"

namespace bitext::text {

using TokenId = std::int32_t;

inline constexpr std::string_view kPad = "<pad>";
inline constexpr std::string_view kUnk = "<unk>";
inline constexpr std::string_view kEos = "<eos>";

// Bijective token <-> id map. Ids 0..2 are <pad>, <unk>, <eos>; the next
// block holds one <2xx> tag per target language; ordinary tokens follow.
class Vocabulary {
 public:
  Vocabulary() = default;

  // `tokens` must start with the reserved block described above.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  // Most frequent tokens of `corpus` (ties by byte order) after the reserved
  // block, keeping the total size at most max_size.
  static Vocabulary build(const std::vector<TokenSeq>& corpus,
                          const std::vector<std::string>& target_langs, std::size_t max_size);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::string>& target_languages() const noexcept { return langs_; }

  TokenId pad_id() const noexcept { return 0; }
  TokenId unk_id() const noexcept { return 1; }
  TokenId eos_id() const noexcept { return 2; }
  std::size_t reserved_count() const noexcept { return 3 + langs_.size(); }

  std::optional<TokenId> find(std::string_view token) const;
  TokenId id_or_unk(std::string_view token) const;
  // Throws VocabularyError for an out-of-range id.
  const std::string& token(TokenId id) const;
  // Throws ConfigError for a language without a tag.
  TokenId tag_id(std::string_view target_lang) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::string> langs_;
  std::unordered_map<std::string, TokenId> index_;
};

// Tag id first when target_lang is given (and the sequence is not already
// tagged), then token ids with <unk> for OOV, then <eos>.
std::vector<TokenId> encode(const Vocabulary& vocab, const TokenSeq& seq,
                            const std::optional<std::string>& target_lang = std::nullopt);

// Inverse of encode for untagged sequences; stops at the first <eos>.
std::vector<std::string> decode(const Vocabulary& vocab, const std::vector<TokenId>& ids);

void write_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab);
Vocabulary read_vocabulary(const std::filesystem::path& path);

}  // namespace bitext::text
