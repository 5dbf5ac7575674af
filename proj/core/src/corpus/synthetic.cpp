#include "bitext/corpus/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "bitext/error.hpp"
#include "bitext/numkit/rng.hpp"

namespace bitext::corpus {

namespace {

constexpr std::size_t kAlphabet = 26;
constexpr std::size_t kMaxSynthLength = 50;

}  // namespace

void SynthSpec::validate() const {
  if (languages.size() < 2) throw ConfigError("synthetic corpus needs at least two languages");
  if (languages.size() > kAlphabet / 2) {
    throw ConfigError("synthetic corpus supports at most " + std::to_string(kAlphabet / 2) + " languages");
  }
  std::set<std::string> seen;
  for (const auto& l : languages) {
    if (l.empty() || l.find_first_of("-\t\n ") != std::string::npos) {
      throw ConfigError("invalid language code '" + l + "'");
    }
    if (!seen.insert(l).second) throw ConfigError("duplicate language code '" + l + "'");
  }
  if (min_length == 0 || min_length > max_length || max_length > kMaxSynthLength) {
    throw ConfigError("synthetic sentence lengths need 1 <= min <= max <= " + std::to_string(kMaxSynthLength));
  }
  if (concepts < 2 * max_length) {
    throw ConfigError("synthetic concept vocabulary must be at least twice the maximum sentence length");
  }
  if (sentences == 0) throw ConfigError("synthetic corpus needs at least one sentence");
  if (reorder_window == 0) throw ConfigError("reorder window must be at least 1");
  if (!(semrel_overlap >= 0.0 && semrel_overlap <= 1.0)) throw ConfigError("semrel overlap must lie in [0, 1]");
}

nlohmann::json SynthSpec::to_json() const {
  return {{"languages", languages},          {"concepts", concepts},
          {"sentences", sentences},          {"min_length", min_length},
          {"max_length", max_length},        {"reorder_window", reorder_window},
          {"semrel_overlap", semrel_overlap}, {"seed", seed}};
}

SynthSpec SynthSpec::from_json(const nlohmann::json& j) {
  SynthSpec s;
  s.languages = j.value("languages", s.languages);
  s.concepts = j.value("concepts", s.concepts);
  s.sentences = j.value("sentences", s.sentences);
  s.min_length = j.value("min_length", s.min_length);
  s.max_length = j.value("max_length", s.max_length);
  s.reorder_window = j.value("reorder_window", s.reorder_window);
  s.semrel_overlap = j.value("semrel_overlap", s.semrel_overlap);
  s.seed = j.value("seed", s.seed);
  return s;
}

SynthLanguage::SynthLanguage(const SynthSpec& spec, std::size_t index)
    : code_(spec.languages.at(index)), window_(spec.reorder_window) {
  const std::size_t base = kAlphabet / spec.languages.size();
  const char first = static_cast<char>('a' + index * base);
  std::size_t width = 1, codes = base;
  while (codes < spec.concepts) {
    codes *= base;
    ++width;
  }
  while (width < 4) {
    codes *= base;
    ++width;
  }

  // Word lengths vary between width and width + 3 so that character
  // length ratios between translations are not constant.
  num::Rng rng = num::Rng(spec.seed).fork(0x5eed0000ULL + index);
  words_.reserve(spec.concepts);
  while (words_.size() < spec.concepts) {
    std::string w(width + static_cast<std::size_t>(rng.below(4)), first);
    for (auto& ch : w) ch = static_cast<char>(first + static_cast<char>(rng.below(base)));
    if (!lookup_.emplace(w, static_cast<int>(words_.size())).second) continue;
    words_.push_back(std::move(w));
  }

  perms_.resize(window_ + 1);
  for (std::size_t r = 1; r <= window_; ++r) {
    perms_[r].resize(r);
    std::iota(perms_[r].begin(), perms_[r].end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(perms_[r]));
  }
}

std::string SynthLanguage::word(int concept_id) const {
  if (concept_id < 0 || static_cast<std::size_t>(concept_id) >= words_.size()) {
    throw VocabularyError("concept " + std::to_string(concept_id) + " outside the synthetic vocabulary");
  }
  return words_[static_cast<std::size_t>(concept_id)];
}

int SynthLanguage::concept_of(const std::string& w) const {
  auto it = lookup_.find(w);
  return it == lookup_.end() ? -1 : it->second;
}

std::vector<std::size_t> SynthLanguage::order(std::size_t length) const {
  std::vector<std::size_t> out;
  out.reserve(length);
  for (std::size_t s = 0; s < length; s += window_) {
    const std::size_t r = std::min(window_, length - s);
    for (std::size_t p = 0; p < r; ++p) out.push_back(s + perms_[r][p]);
  }
  return out;
}

std::vector<std::string> SynthLanguage::render(const std::vector<int>& concepts) const {
  std::vector<std::string> out;
  out.reserve(concepts.size());
  for (std::size_t pos : order(concepts.size())) out.push_back(word(concepts[pos]));
  return out;
}

std::string SynthLanguage::sentence(const std::vector<int>& concepts) const {
  std::string s;
  for (const auto& w : render(concepts)) {
    if (!s.empty()) s += ' ';
    s += w;
  }
  return s;
}

std::string SynthCorpus::sentence_id(const std::string& lang, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", i);
  return lang + "-" + buf;
}

std::string SynthCorpus::semrel_id(const std::string& lang, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%06zu", i);
  return lang + "-" + buf;
}

std::vector<int> semrel_variant(const std::vector<int>& base, double overlap, std::size_t concepts,
                                std::uint64_t seed) {
  num::Rng rng(seed);
  const std::size_t n = base.size();
  const auto replace = static_cast<std::size_t>(std::llround((1.0 - overlap) * static_cast<double>(n)));
  std::vector<std::size_t> pos(n);
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(pos));
  const std::set<int> present(base.begin(), base.end());
  if (present.size() >= concepts) throw ConfigError("semrel_variant: no concepts left to substitute");
  std::vector<int> out = base;
  for (std::size_t k = 0; k < replace; ++k) {
    int c;
    do {
      c = static_cast<int>(rng.below(concepts));
    } while (present.count(c));
    out[pos[k]] = c;
  }
  return out;
}

SynthCorpus generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  SynthCorpus out;
  out.spec = spec;
  num::Rng root(spec.seed);
  num::Rng draw = root.fork(1);
  num::Rng semrel_seeds = root.fork(2);
  const std::size_t span = spec.max_length - spec.min_length + 1;
  for (std::size_t i = 0; i < spec.sentences; ++i) {
    const std::size_t len = spec.min_length + static_cast<std::size_t>(draw.below(span));
    std::vector<int> c(len);
    for (auto& v : c) v = static_cast<int>(draw.below(spec.concepts));
    out.semrel_concepts.push_back(semrel_variant(c, spec.semrel_overlap, spec.concepts, semrel_seeds.next_u64()));
    out.concepts.push_back(std::move(c));
  }
  for (std::size_t l = 0; l < spec.languages.size(); ++l) {
    const SynthLanguage lang(spec, l);
    MonoCorpus mono(lang.code()), semrel(lang.code());
    for (std::size_t i = 0; i < spec.sentences; ++i) {
      mono.add(SynthCorpus::sentence_id(lang.code(), i), lang.sentence(out.concepts[i]));
      semrel.add(SynthCorpus::semrel_id(lang.code(), i), lang.sentence(out.semrel_concepts[i]));
    }
    out.mono.emplace(lang.code(), std::move(mono));
    out.semrel.emplace(lang.code(), std::move(semrel));
  }
  return out;
}

}  // namespace bitext::corpus
