#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bitext::corpus {

struct Sentence {
  std::string id;
  std::string text;
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Ordered monolingual records. Ids are unique and start with "<language>-".
class MonoCorpus {
 public:
  MonoCorpus() = default;
  explicit MonoCorpus(std::string language) : language_(std::move(language)) {}

  const std::string& language() const noexcept { return language_; }
  const std::vector<Sentence>& sentences() const noexcept { return sentences_; }
  std::size_t size() const noexcept { return sentences_.size(); }

  // ParseError on a duplicate id or an id without the language prefix.
  void add(std::string id, std::string text);
  std::optional<std::size_t> find(std::string_view id) const;
  const std::string& text(std::string_view id) const;  // IntegrityError if absent

 private:
  std::string language_;
  std::vector<Sentence> sentences_;
  std::unordered_map<std::string, std::size_t> index_;
};

using GoldPairs = std::vector<std::pair<std::string, std::string>>;

// "id<TAB>text" per line. An empty language infers the code from the first
// id. Errors name the source and the 1-based line number.
MonoCorpus parse_mono(std::string_view content, std::string language = {},
                      const std::string& source = "<memory>");
GoldPairs parse_gold(std::string_view content, const std::string& source = "<memory>");

MonoCorpus read_mono(const std::filesystem::path& path, std::string language = {});
GoldPairs read_gold(const std::filesystem::path& path);

// IntegrityError naming the first id that neither corpus resolves.
void check_gold(const GoldPairs& gold, const MonoCorpus& src, const MonoCorpus& tgt);

struct BuccData {
  MonoCorpus src;
  MonoCorpus tgt;
  GoldPairs gold;
};

BuccData read_bucc(const std::filesystem::path& src, const std::filesystem::path& tgt,
                   const std::filesystem::path& gold);

// Exactly one newline after every record.
std::string format_mono(const MonoCorpus& c);
std::string format_gold(const GoldPairs& g);
void write_mono(const std::filesystem::path& path, const MonoCorpus& c);
void write_gold(const std::filesystem::path& path, const GoldPairs& g);

// Whole-file helpers shared by the pipeline.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace bitext::corpus
