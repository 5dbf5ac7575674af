#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bitext/textproc/tokenizer.hpp"

namespace bitext::text {

inline constexpr std::string_view kContinuation = "@@";

// Ordered merge list learned by byte pair encoding over the characters of
// each word. Merges never cross word boundaries; the word end is implicit
// and non-final units are marked with "@@".
class BpeModel {
 public:
  using Merge = std::pair<std::string, std::string>;

  BpeModel() = default;
  explicit BpeModel(std::vector<Merge> merges);

  const std::vector<Merge>& merges() const noexcept { return merges_; }
  std::size_t size() const noexcept { return merges_.size(); }

  // Segments one token into subword units; non-final units carry "@@".
  std::vector<std::string> segment(std::string_view token) const;

  friend bool operator==(const BpeModel& a, const BpeModel& b) { return a.merges_ == b.merges_; }

 private:
  std::vector<Merge> merges_;
  std::map<Merge, std::size_t> rank_;
};

// Greedy most-frequent adjacent pair merging; ties go to the
// lexicographically smallest (left, right) pair.
BpeModel bpe_learn(const std::vector<TokenSeq>& corpus, std::size_t num_merges);

// Segments every token; a leading tag token is passed through untouched.
TokenSeq bpe_apply(const BpeModel& model, const TokenSeq& seq);

// Joins subword units back into tokens by removing continuation markers.
std::vector<std::string> desegment(const std::vector<std::string>& units);

void write_bpe(const std::filesystem::path& path, const BpeModel& model);
BpeModel read_bpe(const std::filesystem::path& path);

}  // namespace bitext::text
