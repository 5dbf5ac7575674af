#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bitext/corpus/bucc.hpp"

namespace bitext::corpus {

struct LabeledPair {
  std::string src_id;
  std::string tgt_id;
  int label = 0;
  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

// Gold pairs as positives plus the same number of negatives drawn uniformly
// without replacement from the non-gold cross pairs. SamplingError when too
// few non-gold pairs exist.
std::vector<LabeledPair> build_balanced(const GoldPairs& gold, const MonoCorpus& src,
                                        const MonoCorpus& tgt, std::uint64_t seed);

struct Splits {
  std::vector<LabeledPair> train;
  std::vector<LabeledPair> ensemble_train;
  std::vector<LabeledPair> heldout;
};

inline constexpr std::array<double, 3> kDefaultSplit{0.875, 0.10, 0.025};

// Sizes by largest remainder; classes are shuffled and interleaved in
// proportion before the cut so each part keeps the label ratio. ConfigError
// when fractions do not sum to 1 or a part would be empty.
Splits split(const std::vector<LabeledPair>& pairs, std::array<double, 3> fractions, std::uint64_t seed);

std::string format_pairs(const std::vector<LabeledPair>& pairs);  // "src<TAB>tgt<TAB>label"
std::vector<LabeledPair> parse_pairs(std::string_view content, const std::string& source = "<memory>");

}  // namespace bitext::corpus
