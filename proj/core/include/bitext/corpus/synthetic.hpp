#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitext/corpus/bucc.hpp"

namespace bitext::corpus {

struct SynthSpec {
  std::vector<std::string> languages{"en", "de", "es", "fr"};
  std::size_t concepts = 200;
  std::size_t sentences = 1000;
  std::size_t min_length = 4;
  std::size_t max_length = 10;
  std::size_t reorder_window = 3;
  double semrel_overlap = 0.5;
  std::uint64_t seed = 1;

  // ConfigError: fewer than two or duplicate languages, more than 13
  // languages, empty concept set, bad length range (max 50), window 0,
  // overlap outside [0, 1].
  void validate() const;
  nlohmann::json to_json() const;
  static SynthSpec from_json(const nlohmann::json& j);
};

// One artificial language: a private alphabet, a private concept-to-word
// code and a fixed permutation applied inside every reorder window.
class SynthLanguage {
 public:
  SynthLanguage(const SynthSpec& spec, std::size_t index);

  const std::string& code() const noexcept { return code_; }
  std::string word(int concept_id) const;
  int concept_of(const std::string& word) const;  // -1 if unknown
  // Words in surface order.
  std::vector<std::string> render(const std::vector<int>& concepts) const;
  std::string sentence(const std::vector<int>& concepts) const;
  // Position map: output position p holds concept index order[p].
  std::vector<std::size_t> order(std::size_t length) const;

 private:
  std::string code_;
  std::vector<std::string> words_;
  std::map<std::string, int> lookup_;
  std::size_t window_;
  std::vector<std::vector<std::size_t>> perms_;  // indexed by chunk size
};

struct SynthCorpus {
  SynthSpec spec;
  std::vector<std::vector<int>> concepts;         // base sentence i
  std::vector<std::vector<int>> semrel_concepts;  // related variant of i
  std::map<std::string, MonoCorpus> mono;         // ids "<lang>-%06d"
  std::map<std::string, MonoCorpus> semrel;       // ids "<lang>-s%06d"

  static std::string sentence_id(const std::string& lang, std::size_t i);
  static std::string semrel_id(const std::string& lang, std::size_t i);
};

// Variant sharing round(overlap * n) positions with `base`; the remaining
// positions receive concepts absent from `base`.
std::vector<int> semrel_variant(const std::vector<int>& base, double overlap, std::size_t concepts,
                                std::uint64_t seed);

SynthCorpus generate_synthetic(const SynthSpec& spec);

}  // namespace bitext::corpus
