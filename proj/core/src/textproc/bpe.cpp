#include "bitext/textproc/bpe.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "bitext/error.hpp"
#include "bitext/textproc/unicode.hpp"

namespace bitext::text {

namespace {

std::vector<std::string> characters(std::string_view token) {
  std::vector<std::string> out;
  for (char32_t c : to_u32(token)) out.push_back(to_utf8(std::u32string(1, c)));
  return out;
}

// Merges every left-to-right occurrence of (a, b) in place.
bool merge_in_place(std::vector<std::string>& symbols, const BpeModel::Merge& m) {
  bool changed = false;
  std::vector<std::string> out;
  out.reserve(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i + 1 < symbols.size() && symbols[i] == m.first && symbols[i + 1] == m.second) {
      out.push_back(symbols[i] + symbols[i + 1]);
      ++i;
      changed = true;
    } else {
      out.push_back(std::move(symbols[i]));
    }
  }
  symbols = std::move(out);
  return changed;
}

}  // namespace

BpeModel::BpeModel(std::vector<Merge> merges) : merges_(std::move(merges)) {
  for (std::size_t i = 0; i < merges_.size(); ++i) rank_.emplace(merges_[i], i);
}

std::vector<std::string> BpeModel::segment(std::string_view token) const {
  std::vector<std::string> symbols = characters(token);
  // Applying the lowest-ranked applicable merge first reproduces a replay of
  // the merge list in learning order.
  while (symbols.size() > 1) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      auto it = rank_.find({symbols[i], symbols[i + 1]});
      if (it != rank_.end() && it->second < best) best = it->second;
    }
    if (best == std::numeric_limits<std::size_t>::max()) break;
    merge_in_place(symbols, merges_[best]);
  }
  for (std::size_t i = 0; i + 1 < symbols.size(); ++i) symbols[i] += kContinuation;
  return symbols;
}

BpeModel bpe_learn(const std::vector<TokenSeq>& corpus, std::size_t num_merges) {
  std::map<std::string, long> word_freq;
  for (const auto& seq : corpus) {
    for (const auto& tok : seq.tokens) {
      if (!is_tag_token(tok)) ++word_freq[tok];
    }
  }

  std::vector<std::vector<std::string>> words;
  std::vector<long> freqs;
  for (const auto& [w, f] : word_freq) {
    words.push_back(characters(w));
    freqs.push_back(f);
  }

  using Merge = BpeModel::Merge;
  std::map<Merge, long> pair_count;
  std::map<Merge, std::set<std::size_t>> pair_words;
  auto add_word = [&](std::size_t w, long sign) {
    const auto& s = words[w];
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      Merge p{s[i], s[i + 1]};
      auto& c = pair_count[p];
      c += sign * freqs[w];
      if (sign > 0) {
        pair_words[p].insert(w);
      } else if (c == 0) {
        pair_count.erase(p);
      }
    }
  };
  for (std::size_t w = 0; w < words.size(); ++w) add_word(w, +1);

  std::vector<Merge> merges;
  while (merges.size() < num_merges) {
    // std::map iterates pairs in lexicographic order, so the first maximum
    // is the tie-break winner.
    const Merge* best = nullptr;
    long best_count = 0;
    for (const auto& [p, c] : pair_count) {
      if (c > best_count) {
        best = &p;
        best_count = c;
      }
    }
    if (best == nullptr) break;
    const Merge chosen = *best;
    merges.push_back(chosen);

    const std::set<std::size_t> affected = pair_words[chosen];
    for (std::size_t w : affected) {
      add_word(w, -1);
      merge_in_place(words[w], chosen);
      add_word(w, +1);
    }
    pair_words.erase(chosen);
    pair_count.erase(chosen);
  }
  return BpeModel(std::move(merges));
}

TokenSeq bpe_apply(const BpeModel& model, const TokenSeq& seq) {
  TokenSeq out;
  out.language = seq.language;
  out.target_tag = seq.target_tag;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    if (i == 0 && seq.target_tag) {
      out.tokens.push_back(seq.tokens[0]);
      continue;
    }
    for (auto& unit : model.segment(seq.tokens[i])) out.tokens.push_back(std::move(unit));
  }
  return out;
}

std::vector<std::string> desegment(const std::vector<std::string>& units) {
  std::vector<std::string> out;
  std::string current;
  bool open = false;
  for (const auto& u : units) {
    if (u.size() >= kContinuation.size() && u.ends_with(kContinuation)) {
      current += u.substr(0, u.size() - kContinuation.size());
      open = true;
    } else {
      current += u;
      out.push_back(std::move(current));
      current.clear();
      open = false;
    }
  }
  if (open) out.push_back(std::move(current));
  return out;
}

void write_bpe(const std::filesystem::path& path, const BpeModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& [a, b] : model.merges()) out << a << ' ' << b << '\n';
}

BpeModel read_bpe(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<BpeModel::Merge> merges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto sp = line.find(' ');
    if (sp == std::string::npos || sp == 0 || sp + 1 == line.size() ||
        line.find(' ', sp + 1) != std::string::npos) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 'left right'");
    }
    merges.emplace_back(line.substr(0, sp), line.substr(sp + 1));
  }
  return BpeModel(std::move(merges));
}

}  // namespace bitext::text
