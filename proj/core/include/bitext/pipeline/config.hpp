#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitext/classify/gradient_boosting.hpp"
#include "bitext/classify/svm.hpp"
#include "bitext/corpus/sampling.hpp"
#include "bitext/corpus/synthetic.hpp"
#include "bitext/features/pair_features.hpp"
#include "bitext/nmt/trainer.hpp"
#include "bitext/numkit/container.hpp"
#include "bitext/simspace/embedding.hpp"
#include "bitext/simspace/projection.hpp"

namespace bitext::pipeline {

enum class ClassifierKind { thrs, gb, svm, ens };
ClassifierKind classifier_from_string(const std::string& s);
std::string to_string(ClassifierKind k);

struct Paths {
  std::filesystem::path corpus = "corpus";
  std::filesystem::path models = "models";
  std::filesystem::path out = "out";
};

// Sentence budget of the synthetic corpora. Training sentences are parallel
// across all languages; test sentences also get semantically related
// variants; the mining pair gets its own sentences.
struct SynthSection {
  corpus::SynthSpec spec;
  std::size_t train_sentences = 2000;
  std::size_t test_sentences = 500;
  std::size_t mine_sentences = 2000;
  std::size_t mine_distractors = 500;  // per side, outside every gold pair
};

struct BpeSection {
  std::size_t merges = 2000;
  std::size_t vocab_size = 10000;
};

struct StatsSection {
  // "auto": the first language outside the pair, else the other side's
  // language. Any other value is used as the tag for every sentence.
  std::string tag = "auto";
  sim::Pooling pooling = sim::Pooling::sum;
};

struct ProjectSection {
  sim::ProjectionMethod method = sim::ProjectionMethod::tsne;
  std::size_t per_language = 7;
  sim::TsneOptions tsne;
};

struct MiningSection {
  std::string src = "de";
  std::string tgt = "en";
  std::array<double, 3> split = corpus::kDefaultSplit;
  std::size_t cv_folds = 0;  // 0 disables cross-validation in `fit`
  std::string mine_split = "heldout";
};

struct PipelineConfig {
  Paths paths;
  std::uint64_t seed = 1;
  num::Precision precision = num::Precision::f32;
  SynthSection synth;
  BpeSection bpe;
  std::size_t embed_dim = 64;
  std::size_t hidden_dim = 64;
  nmt::TrainConfig train;
  std::optional<std::filesystem::path> checkpoint;  // default: latest in models/
  StatsSection stats;
  ProjectSection project;
  MiningSection mining;
  feat::Scenario scenario = feat::Scenario::ctx;
  ClassifierKind classifier = ClassifierKind::thrs;
  cls::GbConfig gb;
  cls::SvmConfig svm;

  // Languages of the run, taken from the synthetic spec.
  const std::vector<std::string>& languages() const noexcept { return synth.spec.languages; }

  // ConfigError for inconsistent values. Path existence is checked per
  // subcommand, against the inputs that subcommand reads.
  void validate() const;
  nlohmann::json to_json() const;
  // Relative paths are resolved against `base`.
  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
};

PipelineConfig load_config(const std::filesystem::path& path);

// Flag values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> checkpoint;
  std::optional<std::string> scenario;
  std::optional<std::string> model;
  std::optional<std::filesystem::path> out;
};

void apply(PipelineConfig& cfg, const Overrides& o);

}  // namespace bitext::pipeline
