#include <algorithm>
#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "bitext/corpus/bucc.hpp"
#include "bitext/corpus/sampling.hpp"
#include "bitext/corpus/synthetic.hpp"
#include "bitext/error.hpp"
#include "bitext/features/surface.hpp"

using namespace bitext;

namespace {

corpus::MonoCorpus mono(const std::string& lang, std::size_t n) {
  corpus::MonoCorpus c(lang);
  for (std::size_t i = 0; i < n; ++i) c.add(lang + "-" + std::to_string(i), "sentence " + std::to_string(i));
  return c;
}

corpus::GoldPairs diagonal(std::size_t n) {
  corpus::GoldPairs g;
  for (std::size_t i = 0; i < n; ++i) g.emplace_back("de-" + std::to_string(i), "en-" + std::to_string(i));
  return g;
}

std::vector<int> concepts_of(const corpus::SynthLanguage& l, const std::string& sentence) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= sentence.size()) {
    const auto sp = sentence.find(' ', start);
    const auto w = sentence.substr(start, sp == std::string::npos ? std::string::npos : sp - start);
    out.push_back(l.concept_of(w));
    if (sp == std::string::npos) break;
    start = sp + 1;
  }
  return out;
}

}  // namespace

TEST(Bucc, ParseAndResolve) {
  const auto src = corpus::parse_mono("de-1\tHallo Welt\nde-2\tZweiter Satz\n");
  EXPECT_EQ(src.language(), "de");
  EXPECT_EQ(src.size(), 2u);
  const auto tgt = corpus::parse_mono("en-9\tHello world\n");
  const auto gold = corpus::parse_gold("de-1\ten-9\n");
  EXPECT_NO_THROW(corpus::check_gold(gold, src, tgt));
  EXPECT_EQ(src.text("de-1"), "Hallo Welt");

  try {
    corpus::check_gold(corpus::parse_gold("de-7\ten-9\n"), src, tgt);
    FAIL();
  } catch (const IntegrityError& e) {
    EXPECT_NE(std::string(e.what()).find("de-7"), std::string::npos);
  }
  EXPECT_THROW(corpus::parse_mono("de-1\ta\nde-1\tb\n"), ParseError);
  try {
    corpus::parse_mono("de-1\ta\nno tab here\n", "", "x.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("x.txt:2"), std::string::npos);
  }
}

TEST(Bucc, FormatRoundTrip) {
  const std::string text = "en-1\tA b c\nen-2\tDéjà vu\n";
  EXPECT_EQ(corpus::format_mono(corpus::parse_mono(text)), text);
  EXPECT_EQ(corpus::format_mono(corpus::parse_mono("en-1\tA b c\nen-2\tDéjà vu")), text);
  const std::string g = "de-1\ten-1\nde-2\ten-2\n";
  EXPECT_EQ(corpus::format_gold(corpus::parse_gold(g)), g);

  const auto dir = std::filesystem::temp_directory_path() / "bitext_bucc";
  std::filesystem::create_directories(dir);
  corpus::write_mono(dir / "en.txt", corpus::parse_mono(text));
  corpus::write_file(dir / "de.txt", "de-1\tx\nde-2\ty\n");
  corpus::write_gold(dir / "gold.tsv", corpus::parse_gold("de-1\ten-2\n"));
  EXPECT_EQ(corpus::read_file(dir / "en.txt"), text);
  const auto data = corpus::read_bucc(dir / "de.txt", dir / "en.txt", dir / "gold.tsv");
  EXPECT_EQ(data.gold.size(), 1u);
  std::filesystem::remove_all(dir);
}

TEST(Sampling, BalancedCountsAndDeterminism) {
  const auto src = mono("de", 10), tgt = mono("en", 10);
  const auto gold = diagonal(10);
  const auto pairs = corpus::build_balanced(gold, src, tgt, 3);
  ASSERT_EQ(pairs.size(), 20u);
  const std::set<std::pair<std::string, std::string>> gs(gold.begin(), gold.end());
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t pos = 0;
  for (const auto& p : pairs) {
    pos += p.label;
    EXPECT_EQ(gs.count({p.src_id, p.tgt_id}) == 1, p.label == 1);
    EXPECT_TRUE(seen.insert({p.src_id, p.tgt_id}).second);
  }
  EXPECT_EQ(pos, 10u);
  EXPECT_EQ(corpus::build_balanced(gold, src, tgt, 3), pairs);
  EXPECT_NE(corpus::build_balanced(gold, src, tgt, 4), pairs);

  corpus::GoldPairs all;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) all.emplace_back("de-" + std::to_string(i), "en-" + std::to_string(j));
  EXPECT_THROW(corpus::build_balanced(all, mono("de", 2), mono("en", 2), 1), SamplingError);
}

TEST(Sampling, SplitProportions) {
  const auto pairs = corpus::build_balanced(diagonal(20), mono("de", 20), mono("en", 20), 1);
  const auto s = corpus::split(pairs, corpus::kDefaultSplit, 7);
  EXPECT_EQ(s.train.size(), 35u);
  EXPECT_EQ(s.ensemble_train.size(), 4u);
  EXPECT_EQ(s.heldout.size(), 1u);
  std::set<std::pair<std::string, std::string>> ids;
  for (const auto* part : {&s.train, &s.ensemble_train, &s.heldout})
    for (const auto& p : *part) EXPECT_TRUE(ids.insert({p.src_id, p.tgt_id}).second);
  EXPECT_EQ(ids.size(), 40u);
  const auto again = corpus::split(pairs, corpus::kDefaultSplit, 7);
  EXPECT_EQ(again.train, s.train);
  EXPECT_EQ(again.heldout, s.heldout);
  std::size_t pos = 0;
  for (const auto& p : s.ensemble_train) pos += p.label;
  EXPECT_EQ(pos, 2u);
  EXPECT_THROW(corpus::split(pairs, {1.0, 0.0, 0.0}, 1), ConfigError);
  EXPECT_THROW(corpus::split(pairs, {0.5, 0.2, 0.2}, 1), ConfigError);
  EXPECT_EQ(corpus::parse_pairs(corpus::format_pairs(pairs)), pairs);
}

TEST(Synthetic, GoldEqualUpToWindowedPermutation) {
  corpus::SynthSpec spec;
  spec.sentences = 60;
  spec.reorder_window = 3;
  const auto c = corpus::generate_synthetic(spec);
  std::vector<corpus::SynthLanguage> langs;
  for (std::size_t i = 0; i < spec.languages.size(); ++i) langs.emplace_back(spec, i);
  for (std::size_t i = 0; i < spec.sentences; ++i) {
    const auto& base = c.concepts[i];
    ASSERT_GE(base.size(), spec.min_length);
    ASSERT_LE(base.size(), spec.max_length);
    for (const auto& l : langs) {
      auto seen = concepts_of(l, c.mono.at(l.code()).text(corpus::SynthCorpus::sentence_id(l.code(), i)));
      ASSERT_EQ(seen.size(), base.size());
      for (std::size_t s = 0; s < base.size(); s += spec.reorder_window) {
        const auto e = std::min(base.size(), s + spec.reorder_window);
        std::vector<int> a(base.begin() + s, base.begin() + e), b(seen.begin() + s, seen.begin() + e);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b);
      }
    }
  }
}

TEST(Synthetic, WindowOneIsRelabeling) {
  corpus::SynthSpec spec;
  spec.sentences = 20;
  spec.reorder_window = 1;
  const auto c = corpus::generate_synthetic(spec);
  const corpus::SynthLanguage fr(spec, 3);
  for (std::size_t i = 0; i < spec.sentences; ++i) {
    EXPECT_EQ(concepts_of(fr, c.mono.at("fr").text(corpus::SynthCorpus::sentence_id("fr", i))), c.concepts[i]);
  }
}

TEST(Synthetic, SemrelOverlapBoundaries) {
  const std::vector<int> base{1, 2, 3, 4, 5, 6};
  EXPECT_EQ(corpus::semrel_variant(base, 1.0, 200, 3), base);
  const auto none = corpus::semrel_variant(base, 0.0, 200, 3);
  for (int v : none) EXPECT_EQ(std::count(base.begin(), base.end(), v), 0);
  const auto half = corpus::semrel_variant(base, 0.5, 200, 3);
  std::size_t same = 0;
  for (std::size_t i = 0; i < base.size(); ++i) same += half[i] == base[i];
  EXPECT_EQ(same, 3u);

  corpus::SynthSpec spec;
  spec.sentences = 30;
  spec.semrel_overlap = 0.0;
  const auto c = corpus::generate_synthetic(spec);
  double total = 0;
  for (std::size_t i = 0; i < spec.sentences; ++i) {
    total += feat::pseudo_cognate_similarity(c.mono.at("en").text(corpus::SynthCorpus::sentence_id("en", i)),
                                             c.semrel.at("en").text(corpus::SynthCorpus::semrel_id("en", i)));
  }
  EXPECT_LT(total / static_cast<double>(spec.sentences), 0.05);
}

TEST(Synthetic, DeterministicAndValidated) {
  corpus::SynthSpec spec;
  spec.sentences = 15;
  const auto a = corpus::generate_synthetic(spec), b = corpus::generate_synthetic(spec);
  EXPECT_EQ(corpus::format_mono(a.mono.at("de")), corpus::format_mono(b.mono.at("de")));
  EXPECT_EQ(corpus::SynthSpec::from_json(spec.to_json()).to_json(), spec.to_json());
  spec.languages = {"en"};
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.languages = {"en", "en"};
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.languages = {"en", "de"};
  spec.semrel_overlap = 1.5;
  EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(Synthetic, NoLexicalOverlapAcrossLanguages) {
  corpus::SynthSpec spec;
  const corpus::SynthLanguage en(spec, 0), de(spec, 1);
  for (int k = 0; k < static_cast<int>(spec.concepts); ++k) {
    EXPECT_EQ(de.concept_of(en.word(k)), -1);
    EXPECT_EQ(en.concept_of(en.word(k)), k);
  }
}
