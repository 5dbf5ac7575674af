#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bitext/corpus/bucc.hpp"
#include "bitext/error.hpp"
#include "bitext/features/pair_features.hpp"
#include "bitext/nmt/serialize.hpp"
#include "bitext/numkit/container.hpp"
#include "bitext/pipeline/config.hpp"

namespace bitext::pipeline::detail {

namespace fs = std::filesystem;

// Shortest round-trip decimal form; the same value always prints the same.
std::string fmt(double v);

fs::path train_file(const PipelineConfig& c, const std::string& lang);
fs::path test_file(const PipelineConfig& c, const std::string& lang);
fs::path semrel_file(const PipelineConfig& c, const std::string& lang);
fs::path scores_file(const PipelineConfig& c);
fs::path mine_file(const PipelineConfig& c, const std::string& lang);
fs::path gold_file(const PipelineConfig& c);
fs::path bpe_file(const PipelineConfig& c);
fs::path vocab_file(const PipelineConfig& c);
fs::path features_file(const PipelineConfig& c);
fs::path model_file(const PipelineConfig& c);
fs::path mined_file(const PipelineConfig& c);

// ConfigError naming the stage when the input is missing.
void require_file(const fs::path& p, const std::string& what);

// ckpt-<step>.btf files under models/, ordered by step.
std::vector<std::pair<std::size_t, fs::path>> list_checkpoints(const fs::path& models);
// cfg.checkpoint, else the latest checkpoint; ConfigError if there is none.
fs::path resolve_checkpoint(const PipelineConfig& c);
std::string checkpoint_label(const fs::path& p);

// Target tags used to embed the two sides of a language pair.
std::pair<std::string, std::string> pair_tags(const PipelineConfig& c, const std::string& a,
                                              const std::string& b);

// Loads a checkpoint in the precision recorded in its header and hands the
// model to `f`.
template <typename F>
void with_model(const fs::path& path, F&& f) {
  const auto container = num::read_container(path);
  if (container.precision == num::Precision::f32) {
    auto model = nmt::from_container<float>(container);
    f(model);
  } else {
    auto model = nmt::from_container<double>(container);
    f(model);
  }
}

struct FeatureRow {
  std::string split;
  std::string src_id;
  std::string tgt_id;
  int label = 0;
  feat::PairFeatures features;
};

std::string format_features(const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> parse_features(std::string_view content, const std::string& source);

}  // namespace bitext::pipeline::detail
