#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "bitext/classify/gradient_boosting.hpp"
#include "bitext/classify/svm.hpp"
#include "bitext/corpus/synthetic.hpp"
#include "bitext/features/surface.hpp"
#include "bitext/nmt/trainer.hpp"
#include "bitext/numkit/matrix.hpp"
#include "bitext/numkit/rng.hpp"
#include "bitext/simspace/embedding.hpp"
#include "bitext/textproc/bpe.hpp"
#include "bitext/textproc/tokenizer.hpp"
#include "bitext/textproc/vocabulary.hpp"

using namespace bitext;

namespace {

const corpus::SynthCorpus& synth() {
  static const corpus::SynthCorpus c = [] {
    corpus::SynthSpec spec;
    spec.sentences = 400;
    return corpus::generate_synthetic(spec);
  }();
  return c;
}

std::vector<text::TokenSeq> token_corpus() {
  std::vector<text::TokenSeq> seqs;
  for (const auto& [lang, mono] : synth().mono) {
    for (const auto& s : mono.sentences()) seqs.push_back(text::tokenize(s.text, lang));
  }
  return seqs;
}

template <typename Real>
struct Setup {
  nmt::NmtModel<Real> model;
  std::vector<nmt::TrainPair> batch;
};

template <typename Real>
Setup<Real> nmt_setup(std::size_t dim) {
  const auto seqs = token_corpus();
  auto bpe = text::bpe_learn(seqs, 2000);
  std::vector<text::TokenSeq> segmented;
  for (const auto& q : seqs) segmented.push_back(text::bpe_apply(bpe, q));
  auto vocab = text::Vocabulary::build(segmented, synth().spec.languages, 10000);
  Setup<Real> s{nmt::NmtModel<Real>(nmt::ModelDims{dim, dim, vocab.size()}, vocab, std::move(bpe), 1), {}};
  const auto& en = synth().mono.at("en").sentences();
  const auto& de = synth().mono.at("de").sentences();
  for (std::size_t i = 0; i < 16; ++i) {
    if (auto p = nmt::make_train_pair(s.model, en[i].text, de[i].text, "de", 50)) s.batch.push_back(*p);
  }
  return s;
}

}  // namespace

static void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  num::Rng rng(1);
  const auto a = num::rng_draw<double>(rng, n, n, 1.0), b = num::rng_draw<double>(rng, n, n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(num::matmul(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Matmul)->RangeMultiplier(2)->Range(16, 256)->Complexity();

template <typename Real>
static void BM_TrainBatch(benchmark::State& state) {
  auto s = nmt_setup<Real>(static_cast<std::size_t>(state.range(0)));
  nmt::TrainConfig cfg;
  cfg.lr = 1.0;
  std::size_t step = 0;
  for (auto _ : state) benchmark::DoNotOptimize(nmt::train_batch(s.model, s.batch, cfg, ++step));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * s.batch.size()));
}
BENCHMARK_TEMPLATE(BM_TrainBatch, float)->Arg(32)->Arg(64);
BENCHMARK_TEMPLATE(BM_TrainBatch, double)->Arg(32);

static void BM_SentenceEmbedding(benchmark::State& state) {
  auto s = nmt_setup<float>(64);
  const auto& text = synth().mono.at("en").sentences()[0].text;
  for (auto _ : state) benchmark::DoNotOptimize(sim::embed_sentence(s.model, text, "en", "de"));
}
BENCHMARK(BM_SentenceEmbedding);

static void BM_BpeLearn(benchmark::State& state) {
  const auto seqs = token_corpus();
  for (auto _ : state) benchmark::DoNotOptimize(text::bpe_learn(seqs, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_BpeLearn)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_BpeApply(benchmark::State& state) {
  const auto seqs = token_corpus();
  const auto model = text::bpe_learn(seqs, 500);
  for (auto _ : state) {
    for (const auto& s : seqs) benchmark::DoNotOptimize(text::bpe_apply(model, s));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * seqs.size()));
}
BENCHMARK(BM_BpeApply)->Unit(benchmark::kMillisecond);

static void BM_SurfaceFeatures(benchmark::State& state) {
  const auto& en = synth().mono.at("en").sentences();
  const auto& de = synth().mono.at("de").sentences();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& s = en[i % en.size()].text;
    const auto& t = de[(i * 7) % de.size()].text;
    benchmark::DoNotOptimize(feat::char_ngram_similarity(s, t));
    benchmark::DoNotOptimize(feat::pseudo_cognate_similarity(s, t));
    ++i;
  }
}
BENCHMARK(BM_SurfaceFeatures);

static cls::Dataset classifier_data(std::size_t n) {
  num::Rng rng(3);
  cls::Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(8);
    for (auto& v : x) v = rng.normal();
    const int y = x[0] + 0.5 * x[1] - 0.3 * x[7] + 0.3 * rng.normal() > 0;
    d.add("r" + std::to_string(i), std::move(x), y);
  }
  for (std::size_t c = 0; c < 8; ++c) d.feature_names.push_back("f" + std::to_string(c));
  return d;
}

static void BM_GbFit(benchmark::State& state) {
  const auto d = classifier_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cls::gb_fit(d));
}
BENCHMARK(BM_GbFit)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_SvmFit(benchmark::State& state) {
  const auto d = classifier_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cls::svm_fit(d));
}
BENCHMARK(BM_SvmFit)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
