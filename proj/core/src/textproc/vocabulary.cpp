#include "bitext/textproc/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "bitext/error.hpp"

namespace bitext::text {

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 3 || tokens[0] != kPad || tokens[1] != kUnk || tokens[2] != kEos) {
    throw VocabularyError("vocabulary must start with <pad>, <unk>, <eos>");
  }
  Vocabulary v;
  for (std::size_t i = 3; i < tokens.size() && is_tag_token(tokens[i]); ++i) {
    v.langs_.push_back(tokens[i].substr(2, tokens[i].size() - 3));
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i >= v.reserved_count() && (is_tag_token(tokens[i]) || tokens[i] == kPad ||
                                    tokens[i] == kUnk || tokens[i] == kEos)) {
      throw VocabularyError("reserved token '" + tokens[i] + "' outside the reserved id range");
    }
    if (!v.index_.emplace(tokens[i], static_cast<TokenId>(i)).second) {
      throw VocabularyError("duplicate vocabulary token '" + tokens[i] + "'");
    }
  }
  v.tokens_ = std::move(tokens);
  return v;
}

Vocabulary Vocabulary::build(const std::vector<TokenSeq>& corpus,
                             const std::vector<std::string>& target_langs, std::size_t max_size) {
  std::vector<std::string> tokens{std::string(kPad), std::string(kUnk), std::string(kEos)};
  for (const auto& l : target_langs) tokens.push_back(tag_token(l));
  if (tokens.size() > max_size) {
    throw ConfigError("vocabulary maximum " + std::to_string(max_size) +
                      " is smaller than the reserved block");
  }

  std::map<std::string, long> freq;
  for (const auto& seq : corpus) {
    for (const auto& t : seq.tokens) {
      if (!is_tag_token(t)) ++freq[t];
    }
  }
  std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [tok, f] : ranked) {
    if (tokens.size() >= max_size) break;
    if (tok == kPad || tok == kUnk || tok == kEos) continue;
    tokens.push_back(tok);
  }
  return from_tokens(std::move(tokens));
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::id_or_unk(std::string_view token) const {
  return find(token).value_or(unk_id());
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw VocabularyError("token id " + std::to_string(id) + " out of range [0, " +
                          std::to_string(tokens_.size()) + ")");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

TokenId Vocabulary::tag_id(std::string_view target_lang) const {
  auto id = find(tag_token(target_lang));
  if (!id) throw ConfigError("unknown target language '" + std::string(target_lang) + "'");
  return *id;
}

std::vector<TokenId> encode(const Vocabulary& vocab, const TokenSeq& seq,
                            const std::optional<std::string>& target_lang) {
  std::vector<TokenId> ids;
  ids.reserve(seq.tokens.size() + 2);
  if (target_lang && !seq.target_tag) ids.push_back(vocab.tag_id(*target_lang));
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    if (i == 0 && seq.target_tag) {
      ids.push_back(vocab.tag_id(*seq.target_tag));
    } else {
      ids.push_back(vocab.id_or_unk(seq.tokens[i]));
    }
  }
  ids.push_back(vocab.eos_id());
  return ids;
}

std::vector<std::string> decode(const Vocabulary& vocab, const std::vector<TokenId>& ids) {
  std::vector<std::string> out;
  for (TokenId id : ids) {
    if (id == vocab.eos_id()) break;
    out.push_back(vocab.token(id));
  }
  return out;
}

void write_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& t : vocab.tokens()) out << t << '\n';
}

Vocabulary read_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) tokens.push_back(line);
  return Vocabulary::from_tokens(std::move(tokens));
}

}  // namespace bitext::text
