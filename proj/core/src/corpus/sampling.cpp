#include "bitext/corpus/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "bitext/error.hpp"
#include "bitext/numkit/rng.hpp"

namespace bitext::corpus {

std::vector<LabeledPair> build_balanced(const GoldPairs& gold, const MonoCorpus& src,
                                        const MonoCorpus& tgt, std::uint64_t seed) {
  check_gold(gold, src, tgt);
  std::set<std::pair<std::size_t, std::size_t>> gold_idx;
  for (const auto& [s, t] : gold) gold_idx.emplace(*src.find(s), *tgt.find(t));

  const std::size_t need = gold.size();
  const std::size_t space = src.size() * tgt.size();
  const std::size_t available = space - gold_idx.size();
  if (available < need) {
    throw SamplingError("cannot draw " + std::to_string(need) + " negatives: only " +
                        std::to_string(available) + " non-gold cross pairs");
  }

  std::vector<LabeledPair> out;
  out.reserve(2 * need);
  for (const auto& [s, t] : gold) out.push_back({s, t, 1});

  num::Rng rng(seed);
  std::vector<std::pair<std::size_t, std::size_t>> negatives;
  if (available <= 4 * need) {
    // Small space: enumerate and take a prefix of a shuffle.
    for (std::size_t i = 0; i < src.size(); ++i) {
      for (std::size_t j = 0; j < tgt.size(); ++j) {
        if (!gold_idx.count({i, j})) negatives.emplace_back(i, j);
      }
    }
    rng.shuffle(std::span<std::pair<std::size_t, std::size_t>>(negatives));
    negatives.resize(need);
  } else {
    std::set<std::pair<std::size_t, std::size_t>> taken;
    while (negatives.size() < need) {
      const auto i = static_cast<std::size_t>(rng.below(src.size()));
      const auto j = static_cast<std::size_t>(rng.below(tgt.size()));
      if (gold_idx.count({i, j}) || !taken.emplace(i, j).second) continue;
      negatives.emplace_back(i, j);
    }
  }
  for (const auto& [i, j] : negatives) out.push_back({src.sentences()[i].id, tgt.sentences()[j].id, 0});
  return out;
}

Splits split(const std::vector<LabeledPair>& pairs, std::array<double, 3> fractions, std::uint64_t seed) {
  double total = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0) || !std::isfinite(f)) throw ConfigError("split fractions must be non-negative");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("split fractions sum to " + std::to_string(total) + ", not 1");

  const std::size_t n = pairs.size();
  std::array<std::size_t, 3> size{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double exact = fractions[k] * static_cast<double>(n);
    size[k] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    rem[k] = exact - static_cast<double>(size[k]);
    assigned += size[k];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++size[order[k % 3]];
  const char* names[3] = {"train", "ensemble_train", "heldout"};
  for (std::size_t k = 0; k < 3; ++k) {
    if (size[k] == 0) {
      throw ConfigError(std::string("split fractions leave the ") + names[k] + " part empty for " +
                        std::to_string(n) + " pairs");
    }
  }

  num::Rng rng(seed);
  std::vector<std::size_t> cls[2];
  for (std::size_t i = 0; i < n; ++i) cls[pairs[i].label == 1 ? 1 : 0].push_back(i);
  for (auto& c : cls) rng.shuffle(std::span<std::size_t>(c));

  // Proportional interleave: at every position take the class furthest
  // behind its share.
  std::vector<std::size_t> seq;
  seq.reserve(n);
  std::size_t taken[2] = {0, 0};
  for (std::size_t k = 0; k < n; ++k) {
    double best = -1e300;
    int pick = 1;
    for (int c = 1; c >= 0; --c) {
      if (taken[c] == cls[c].size()) continue;
      const double deficit = static_cast<double>(cls[c].size()) * static_cast<double>(k + 1) / static_cast<double>(n) -
                             static_cast<double>(taken[c]);
      if (deficit > best) {
        best = deficit;
        pick = c;
      }
    }
    seq.push_back(cls[pick][taken[pick]++]);
  }

  Splits s;
  std::vector<LabeledPair>* parts[3] = {&s.train, &s.ensemble_train, &s.heldout};
  std::size_t pos = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < size[k]; ++i) parts[k]->push_back(pairs[seq[pos++]]);
  }
  return s;
}

std::string format_pairs(const std::vector<LabeledPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) out += p.src_id + '\t' + p.tgt_id + '\t' + std::to_string(p.label) + '\n';
  return out;
}

std::vector<LabeledPair> parse_pairs(std::string_view content, const std::string& source) {
  std::vector<LabeledPair> out;
  std::size_t pos = 0, line = 0;
  while (pos < content.size()) {
    auto end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    const auto l = content.substr(pos, end - pos);
    ++line;
    pos = end + 1;
    const auto t1 = l.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : l.find('\t', t1 + 1);
    if (t2 == std::string_view::npos || (l.substr(t2 + 1) != "0" && l.substr(t2 + 1) != "1")) {
      throw ParseError(source + ":" + std::to_string(line) + ": expected 'src<TAB>tgt<TAB>0|1'");
    }
    out.push_back({std::string(l.substr(0, t1)), std::string(l.substr(t1 + 1, t2 - t1 - 1)),
                   l.substr(t2 + 1) == "1" ? 1 : 0});
  }
  return out;
}

}  // namespace bitext::corpus
