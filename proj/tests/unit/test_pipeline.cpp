#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bitext/corpus/bucc.hpp"
#include "bitext/error.hpp"
#include "bitext/pipeline/config.hpp"
#include "bitext/pipeline/run.hpp"

using namespace bitext;
namespace fs = std::filesystem;

namespace {

nlohmann::json tiny_config() {
  return nlohmann::json::parse(R"({
    "seed": 3,
    "synth": {"train_sentences": 200, "test_sentences": 40, "mine_sentences": 300, "mine_distractors": 50},
    "model": {"embed": 8, "hidden": 8},
    "train": {"lr": 1.0, "epochs": 1, "checkpoint_every": 100},
    "project": {"iterations": 250}
  })");
}

class PipelineRun : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("bitext_pipeline_" + std::string(
        ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    cfg_ = pipeline::PipelineConfig::from_json(tiny_config(), dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& sub) {
    log_.str("");
    err_.str("");
    return pipeline::run(sub, cfg_, log_, err_);
  }

  fs::path dir_;
  pipeline::PipelineConfig cfg_;
  std::ostringstream log_, err_;
};

}  // namespace

TEST(Config, ParsesAndResolvesPaths) {
  const auto c = pipeline::PipelineConfig::from_json(tiny_config(), "/base");
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.embed_dim, 8u);
  EXPECT_EQ(c.paths.corpus, fs::path("/base/corpus"));
  EXPECT_EQ(c.train.checkpoint_every, 100u);
  const auto again = pipeline::PipelineConfig::from_json(c.to_json(), "/base");
  EXPECT_EQ(again.to_json(), c.to_json());
}

TEST(Config, RejectsUnknownAndBadValues) {
  auto j = tiny_config();
  j["sedd"] = 4;
  EXPECT_THROW(pipeline::PipelineConfig::from_json(j), ConfigError);
  j = tiny_config();
  j["scenario"] = "both";
  EXPECT_THROW(pipeline::PipelineConfig::from_json(j), ConfigError);
  j = tiny_config();
  j["train"]["lr"] = "fast";
  EXPECT_THROW(pipeline::PipelineConfig::from_json(j), ConfigError);
  j = tiny_config();
  j["train"]["seed"] = 9;
  EXPECT_THROW(pipeline::PipelineConfig::from_json(j), ConfigError);
}

TEST(Config, LoadFromFileAndOverrides) {
  const auto dir = fs::temp_directory_path() / "bitext_cfg_file";
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << tiny_config().dump();
  auto c = pipeline::load_config(dir / "c.json");
  EXPECT_EQ(c.paths.out, dir / "out");
  pipeline::Overrides o;
  o.seed = 11;
  o.scenario = "all";
  o.model = "ens";
  o.out = "/elsewhere";
  pipeline::apply(c, o);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.scenario, feat::Scenario::all);
  EXPECT_EQ(c.classifier, pipeline::ClassifierKind::ens);
  EXPECT_EQ(c.paths.out, fs::path("/elsewhere"));
  o = {};
  o.model = "tree";
  EXPECT_THROW(pipeline::apply(c, o), ConfigError);
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_THROW(pipeline::load_config(dir / "bad.json"), ParseError);
  EXPECT_THROW(pipeline::load_config(dir / "missing.json"), ValidationError);
  fs::remove_all(dir);
}

TEST_F(PipelineRun, FullSequence) {
  for (const auto* sub : {"synth", "bpe", "train", "embed", "stats", "project", "features"}) {
    ASSERT_EQ(run(sub), 0) << sub << ": " << err_.str();
  }
  const auto stats = nlohmann::json::parse(corpus::read_file(cfg_.paths.out / "stats.json"));
  // Two checkpoints (step 100 and the final one) times six language pairs.
  EXPECT_EQ(stats.at("rows").size(), 12u);
  for (const auto& [scenario, model] : {std::pair{"ctx", "thrs"}, {"comp", "gb"}, {"all", "ens"}}) {
    cfg_.scenario = feat::scenario_from_string(scenario);
    cfg_.classifier = pipeline::classifier_from_string(model);
    for (const auto* sub : {"fit", "mine", "eval"}) ASSERT_EQ(run(sub), 0) << sub << ": " << err_.str();
  }
  const auto table = corpus::read_file(cfg_.paths.out / "extraction.tsv");
  EXPECT_NE(table.find("ctx"), std::string::npos);
  EXPECT_NE(table.find("all"), std::string::npos);
  const auto ev = nlohmann::json::parse(corpus::read_file(cfg_.paths.out / "eval-all-ens.json"));
  EXPECT_GE(ev.at("F1").get<double>(), 0.0);
  EXPECT_LE(ev.at("F1").get<double>(), 1.0);

  // Threshold fitting only applies to the single-feature scenario.
  cfg_.scenario = feat::Scenario::comp;
  cfg_.classifier = pipeline::ClassifierKind::thrs;
  EXPECT_EQ(run("fit"), 1);
  EXPECT_NE(err_.str().find("fit"), std::string::npos);

  // Withheld gold standard.
  fs::remove(cfg_.paths.corpus / "mine" / "gold.tsv");
  cfg_.scenario = feat::Scenario::ctx;
  EXPECT_EQ(run("eval"), 1);
  EXPECT_NE(err_.str().find("gold"), std::string::npos);
}

TEST_F(PipelineRun, MissingInputsAreValidationErrors) {
  EXPECT_EQ(run("bpe"), 1);
  EXPECT_EQ(run("stats"), 1);
  EXPECT_EQ(run("features"), 1);
  EXPECT_THROW(pipeline::execute("frobnicate", cfg_, log_), UsageError);
}
