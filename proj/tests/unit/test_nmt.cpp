#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "bitext/error.hpp"
#include "bitext/nmt/model.hpp"
#include "bitext/nmt/serialize.hpp"
#include "bitext/nmt/trainer.hpp"
#include "bitext/numkit/gradcheck.hpp"

using namespace bitext;

namespace {

text::Vocabulary toy_vocab() {
  std::vector<text::TokenSeq> corpus{text::tokenize("a b c d e f g h", "en"), text::tokenize("p q r s t", "de")};
  return text::Vocabulary::build(corpus, {"en", "de", "es"}, 100);
}

template <typename Real>
nmt::NmtModel<Real> toy_model(std::size_t dim = 6, double init = 0.0, std::uint64_t seed = 1) {
  const auto v = toy_vocab();
  return nmt::NmtModel<Real>(nmt::ModelDims{dim, dim, v.size()}, v, text::BpeModel(), seed, init);
}

template <typename Real>
void zero_all(nmt::NmtModel<Real>& m) {
  for (auto* p : m.params()) p->value.fill(Real(0));
}

std::vector<text::TokenId> ids(const text::Vocabulary& v, const std::string& s) {
  return text::encode(v, text::tokenize(s), std::nullopt);
}

}  // namespace

TEST(EncodeSource, ZeroWeightsGiveZeroContext) {
  auto m = toy_model<double>();
  zero_all(m);
  const auto ctx = nmt::encode_source(m, std::vector<text::TokenId>{*m.vocab().find("a")});
  ASSERT_EQ(ctx.length(), 1u);
  for (double v : ctx.states.row(0)) EXPECT_EQ(v, 0.0);
}

TEST(EncodeSource, OneRowPerToken) {
  const auto m = toy_model<double>();
  const auto x = ids(m.vocab(), "a b c d");
  const auto ctx = nmt::encode_source(m, x);
  EXPECT_EQ(ctx.length(), x.size());
  EXPECT_EQ(ctx.states.cols(), 2 * m.dims().hidden);
}

TEST(EncodeSource, ReversalSwapsHalvesWithSharedWeights) {
  auto m = toy_model<double>(5, 0.3);
  m.enc_bwd.w.value = m.enc_fwd.w.value;
  m.enc_bwd.u.value = m.enc_fwd.u.value;
  m.enc_bwd.uc.value = m.enc_fwd.uc.value;
  m.enc_bwd.b.value = m.enc_fwd.b.value;
  const auto x = ids(m.vocab(), "a b c d e");
  const std::vector<text::TokenId> rx(x.rbegin(), x.rend());
  const auto c = nmt::encode_source(m, x);
  const auto r = nmt::encode_source(m, rx);
  const std::size_t n = x.size(), d = m.dims().hidden;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      EXPECT_NEAR(r.states(i, k), c.states(n - 1 - i, d + k), 1e-14);
      EXPECT_NEAR(r.states(i, d + k), c.states(n - 1 - i, k), 1e-14);
    }
  }
}

TEST(EncodeSource, Errors) {
  const auto m = toy_model<double>();
  EXPECT_THROW(nmt::encode_source(m, std::vector<text::TokenId>{}), EmptyInputError);
  EXPECT_THROW(nmt::encode_source(m, std::vector<text::TokenId>{9999}), VocabularyError);
}

TEST(Attention, SinglePositionTakesAllWeight) {
  const auto m = toy_model<double>();
  const auto ctx = nmt::encode_source(m, std::vector<text::TokenId>{*m.vocab().find("a")});
  const std::vector<double> z(m.dims().hidden, 0.1);
  const auto att = nmt::attention_step<double>(m, z, ctx);
  ASSERT_EQ(att.alpha.size(), 1u);
  EXPECT_DOUBLE_EQ(att.alpha[0], 1.0);
  for (std::size_t k = 0; k < att.q.size(); ++k) EXPECT_DOUBLE_EQ(att.q[k], ctx.states(0, k));
}

TEST(Attention, IdenticalRowsOrZeroVGiveUniformWeights) {
  auto m = toy_model<double>();
  nmt::ContextMatrixT<double> ctx;
  ctx.states = num::Matrix(4, 2 * m.dims().hidden);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < ctx.states.cols(); ++c) ctx.states(r, c) = 0.1 * static_cast<double>(c);
  }
  const std::vector<double> z(m.dims().hidden, 0.2);
  auto att = nmt::attention_step<double>(m, z, ctx);
  for (double a : att.alpha) EXPECT_NEAR(a, 0.25, 1e-15);
  for (std::size_t c = 0; c < att.q.size(); ++c) EXPECT_NEAR(att.q[c], ctx.states(0, c), 1e-15);

  m.att_v.value.fill(0.0);
  const auto real = nmt::encode_source(m, ids(m.vocab(), "a b c"));
  att = nmt::attention_step<double>(m, z, real);
  for (double a : att.alpha) EXPECT_NEAR(a, 1.0 / 4.0, 1e-15);
}

TEST(Attention, WeightsFormDistribution) {
  const auto m = toy_model<double>(6, 1.0);
  num::Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<text::TokenId> x;
    const auto n = 1 + rng.below(8);
    for (std::size_t i = 0; i < n; ++i) x.push_back(static_cast<text::TokenId>(rng.below(m.vocab().size())));
    const auto ctx = nmt::encode_source(m, x);
    std::vector<double> z(m.dims().hidden);
    for (auto& v : z) v = rng.uniform(-1, 1);
    const auto att = nmt::attention_step<double>(m, z, ctx);
    double sum = 0;
    for (double a : att.alpha) {
      EXPECT_GT(a, 0.0);
      sum += a;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Decoder, DistributionAndPurity) {
  const auto m = toy_model<double>();
  const auto ctx = nmt::encode_source(m, ids(m.vocab(), "a b"));
  const auto z0 = nmt::initial_decoder_state(m, ctx);
  const auto o1 = nmt::decoder_step<double>(m, z0, m.vocab().eos_id(), ctx);
  const auto o2 = nmt::decoder_step<double>(m, z0, m.vocab().eos_id(), ctx);
  ASSERT_EQ(o1.dist.size(), m.vocab().size());
  double sum = 0;
  for (double p : o1.dist) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(o1.dist, o2.dist);
  EXPECT_EQ(o1.z, o2.z);
}

TEST(Decoder, ZeroOutputWeightsGiveUniform) {
  auto m = toy_model<double>();
  m.out_w.value.fill(0.0);
  m.out_b.value.fill(0.0);
  const auto ctx = nmt::encode_source(m, ids(m.vocab(), "a b"));
  const auto o = nmt::decoder_step<double>(m, nmt::initial_decoder_state(m, ctx), m.vocab().eos_id(), ctx);
  for (double p : o.dist) EXPECT_NEAR(p, 1.0 / static_cast<double>(m.vocab().size()), 1e-15);
}

TEST(TrainBatch, InitialLossNearLogV) {
  const auto m = toy_model<double>(8, 0.08);
  nmt::TrainPair p{text::encode(m.vocab(), text::tokenize("a b c"), std::string("de")),
                   ids(m.vocab(), "p q r")};
  const double loss = nmt::batch_loss(m, std::vector<nmt::TrainPair>{p});
  const double ln_v = std::log(static_cast<double>(m.vocab().size()));
  EXPECT_NEAR(loss, ln_v, 0.1 * ln_v);
}

TEST(TrainBatch, MemorisesSinglePairAndTranslatesIt) {
  auto m = toy_model<double>(8);
  const std::vector<nmt::TrainPair> batch{
      {text::encode(m.vocab(), text::tokenize("a b c"), std::string("de")), ids(m.vocab(), "p q r")}};
  nmt::TrainConfig cfg;
  cfg.lr = 1.0;
  double loss = 0;
  for (std::size_t step = 0; step < 2000; ++step) {
    loss = nmt::train_batch(m, batch, cfg, step);
    if (loss < 0.05) break;
  }
  EXPECT_LT(loss, 0.1);
  EXPECT_EQ(nmt::greedy_translate<double>(m, batch[0].source, 10), (std::vector<std::string>{"p", "q", "r"}));
}

TEST(TrainBatch, DeterministicForSameSeed) {
  auto a = toy_model<float>(6, 0.0, 5);
  auto b = toy_model<float>(6, 0.0, 5);
  const std::vector<nmt::TrainPair> batch{
      {text::encode(a.vocab(), text::tokenize("a b"), std::string("de")), ids(a.vocab(), "p q")},
      {text::encode(a.vocab(), text::tokenize("c d e"), std::string("en")), ids(a.vocab(), "f g")}};
  nmt::TrainConfig cfg;
  cfg.lr = 1.0;
  for (int i = 0; i < 5; ++i) EXPECT_EQ(nmt::train_batch(a, batch, cfg), nmt::train_batch(b, batch, cfg));
}

TEST(TrainBatch, LossMostlyNonIncreasingOverFirstUpdates) {
  auto m = toy_model<double>(8);
  std::vector<nmt::TrainPair> batch;
  for (const auto& [s, t] : std::vector<std::pair<std::string, std::string>>{
           {"a b c", "p q r"}, {"d e", "s t"}, {"f g h a", "q q p s"}}) {
    batch.push_back({text::encode(m.vocab(), text::tokenize(s), std::string("de")), ids(m.vocab(), t)});
  }
  const nmt::TrainConfig cfg;  // default Adadelta settings
  std::vector<double> losses;
  for (std::size_t step = 0; step <= 50; ++step) losses.push_back(nmt::train_batch(m, batch, cfg, step));
  int non_increasing = 0;
  for (std::size_t i = 1; i < losses.size(); ++i) non_increasing += losses[i] <= losses[i - 1];
  EXPECT_GE(non_increasing, 45);
}

TEST(TrainBatch, FullGradientMatchesFiniteDifferences) {
  auto m = toy_model<double>(4, 0.5, 3);
  const std::vector<nmt::TrainPair> batch{
      {text::encode(m.vocab(), text::tokenize("a b c"), std::string("de")), ids(m.vocab(), "p q")},
      {text::encode(m.vocab(), text::tokenize("d"), std::string("en")), ids(m.vocab(), "s t r")}};
  m.zero_grad();
  nmt::batch_loss_and_grad(m, batch);
  const auto params = m.params();
  const auto r = num::finite_diff_check(params, [&] { return nmt::batch_loss(m, batch); }, 1e-3);
  EXPECT_LT(r.max_relative_error, 1e-4) << r.worst_param << "[" << r.worst_index << "]";
}

TEST(Greedy, RespectsMaxLen) {
  const auto m = toy_model<double>(6, 1.0);
  const auto src = text::encode(m.vocab(), text::tokenize("a b"), std::string("de"));
  EXPECT_TRUE(nmt::greedy_translate<double>(m, src, 0).empty());
  for (std::size_t n : {1u, 3u, 7u}) EXPECT_LE(nmt::greedy_translate<double>(m, src, n).size(), n);
}

TEST(ExtractContext, RowsDeterminismAndTagSensitivity) {
  const auto m = toy_model<double>();
  const auto a = nmt::extract_context(m, "a b c", "en", "de");
  const auto b = nmt::extract_context(m, "a b c", "en", "de");
  EXPECT_EQ(a.length(), 3u + 2u);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.source_lang, "en");
  EXPECT_EQ(a.target_tag, std::optional<std::string>("de"));
  const auto c = nmt::extract_context(m, "a b c", "en", "es");
  EXPECT_NE(a.states, c.states);
  // The source language's own tag is accepted as a zero-shot direction.
  EXPECT_NO_THROW(nmt::extract_context(m, "a b c", "en", "en"));
  EXPECT_THROW(nmt::extract_context(m, "a b c", "en", "xx"), ConfigError);
}

TEST(Serialize, RoundTripGivesIdenticalContexts) {
  const auto dir = std::filesystem::temp_directory_path() / "bitext_nmt_serialize";
  std::filesystem::create_directories(dir);
  for (int precision = 0; precision < 2; ++precision) {
    const auto path = dir / ("m" + std::to_string(precision) + ".btf");
    if (precision == 0) {
      const auto m = toy_model<float>(6, 0.0, 9);
      nmt::save_model(path, m);
      const auto back = nmt::load_model<float>(path);
      EXPECT_EQ(nmt::extract_context(m, "a b", "en", "de").states,
                nmt::extract_context(back, "a b", "en", "de").states);
      EXPECT_THROW(nmt::load_model<double>(path), ConfigError);
    } else {
      const auto m = toy_model<double>(6, 0.0, 9);
      nmt::save_model(path, m);
      const auto back = nmt::load_model<double>(path);
      EXPECT_EQ(nmt::extract_context(m, "a b", "en", "de").states,
                nmt::extract_context(back, "a b", "en", "de").states);
      EXPECT_EQ(back.vocab(), m.vocab());
    }
  }
  std::filesystem::remove_all(dir);
}

TEST(Train, DropsLongPairsAndReportsEpochs) {
  auto m = toy_model<float>(6);
  std::vector<nmt::TrainPair> pairs;
  for (int i = 0; i < 10; ++i) {
    pairs.push_back({text::encode(m.vocab(), text::tokenize("a b"), std::string("de")), ids(m.vocab(), "p q")});
  }
  nmt::TrainConfig cfg;
  cfg.batch_size = 4;
  cfg.epochs = 2;
  std::size_t checkpoints = 0;
  nmt::TrainHooks hooks;
  hooks.on_checkpoint = [&](std::size_t) { ++checkpoints; };
  const auto r = nmt::train(m, pairs, cfg, hooks);
  EXPECT_EQ(r.epochs, 2u);
  EXPECT_EQ(r.steps, 6u);
  EXPECT_EQ(r.epoch_losses.size(), 2u);
  EXPECT_EQ(checkpoints, 1u);
  EXPECT_FALSE(nmt::make_train_pair(m, "a b c d e", "p", "de", 3));
}
