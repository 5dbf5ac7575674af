#include "bitext/pipeline/config.hpp"

#include "bitext/corpus/bucc.hpp"
#include "bitext/error.hpp"

namespace bitext::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

ClassifierKind classifier_from_string(const std::string& s) {
  if (s == "thrs") return ClassifierKind::thrs;
  if (s == "gb") return ClassifierKind::gb;
  if (s == "svm") return ClassifierKind::svm;
  if (s == "ens") return ClassifierKind::ens;
  throw ConfigError("unknown classifier '" + s + "' (expected thrs, gb, svm or ens)");
}

std::string to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::thrs: return "thrs";
    case ClassifierKind::gb: return "gb";
    case ClassifierKind::svm: return "svm";
    case ClassifierKind::ens: return "ens";
  }
  return "thrs";
}

namespace {

std::string method_name(sim::ProjectionMethod m) {
  return m == sim::ProjectionMethod::pca ? "pca" : "tsne";
}

fs::path resolve(const fs::path& p, const fs::path& base) {
  if (p.is_absolute() || base.empty()) return p;
  return base / p;
}

void check_known_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ConfigError("config: unknown key '" + k + "' in " + where);
  }
}

}  // namespace

void PipelineConfig::validate() const {
  synth.spec.validate();
  if (synth.train_sentences == 0 || synth.test_sentences < 2) {
    throw ConfigError("config: synth needs train_sentences > 0 and test_sentences >= 2");
  }
  if (bpe.vocab_size <= 3 + languages().size()) {
    throw ConfigError("config: bpe.vocab_size leaves no room for ordinary tokens");
  }
  if (embed_dim == 0 || hidden_dim == 0) throw ConfigError("config: model dimensions must be positive");
  train.validate();
  if (stats.tag != "auto" && stats.tag.empty()) throw ConfigError("config: stats.tag is empty");
  if (project.per_language == 0) throw ConfigError("config: project.per_language must be positive");
  if (mining.src == mining.tgt) throw ConfigError("config: mining.src and mining.tgt must differ");
  if (mining.mine_split != "train" && mining.mine_split != "ensemble_train" &&
      mining.mine_split != "heldout" && mining.mine_split != "all") {
    throw ConfigError("config: mining.mine_split must be train, ensemble_train, heldout or all");
  }
  gb.validate();
  svm.validate();
}

json PipelineConfig::to_json() const {
  json j;
  j["paths"] = {{"corpus", paths.corpus.string()},
                {"models", paths.models.string()},
                {"out", paths.out.string()}};
  j["seed"] = seed;
  j["precision"] = num::to_string(precision);
  auto spec = synth.spec.to_json();
  spec.erase("seed");
  spec.erase("sentences");
  j["synth"] = {{"spec", spec},
                {"train_sentences", synth.train_sentences},
                {"test_sentences", synth.test_sentences},
                {"mine_sentences", synth.mine_sentences},
                {"mine_distractors", synth.mine_distractors}};
  j["bpe"] = {{"merges", bpe.merges}, {"vocab_size", bpe.vocab_size}};
  j["model"] = {{"embed", embed_dim}, {"hidden", hidden_dim}};
  auto tj = train.to_json();
  tj.erase("seed");
  j["train"] = tj;
  j["checkpoint"] = checkpoint ? json(checkpoint->string()) : json(nullptr);
  j["stats"] = {{"tag", stats.tag}, {"pooling", sim::to_string(stats.pooling)}};
  j["project"] = {{"method", method_name(project.method)},
                  {"per_language", project.per_language},
                  {"perplexity", project.tsne.perplexity},
                  {"iterations", project.tsne.iterations},
                  {"exaggeration_iters", project.tsne.exaggeration_iters},
                  {"exaggeration", project.tsne.exaggeration},
                  {"learning_rate", project.tsne.learning_rate}};
  j["mining"] = {{"src", mining.src},
                 {"tgt", mining.tgt},
                 {"split", mining.split},
                 {"cv_folds", mining.cv_folds},
                 {"mine_split", mining.mine_split}};
  j["scenario"] = feat::to_string(scenario);
  j["classifier"] = to_string(classifier);
  auto g = gb.to_json();
  g.erase("seed");
  j["gb"] = g;
  auto s = svm.to_json();
  s.erase("seed");
  j["svm"] = s;
  return j;
}

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base) {
  check_known_keys(j,
                   {"paths", "seed", "precision", "synth", "bpe", "model", "train", "checkpoint", "stats",
                    "project", "mining", "scenario", "classifier", "gb", "svm"},
                   "config");
  PipelineConfig c;
  try {
    if (j.contains("paths")) {
      const auto& p = j.at("paths");
      check_known_keys(p, {"corpus", "models", "out"}, "paths");
      c.paths.corpus = p.value("corpus", c.paths.corpus.string());
      c.paths.models = p.value("models", c.paths.models.string());
      c.paths.out = p.value("out", c.paths.out.string());
    }
    c.seed = j.value("seed", c.seed);
    // Stage seeds all come from the top-level seed.
    for (const auto* section : {"train", "gb", "svm"}) {
      if (j.contains(section) && j.at(section).is_object() && j.at(section).contains("seed")) {
        throw ConfigError(std::string("config: '") + section + ".seed' is not accepted; use the top-level seed");
      }
    }
    if (j.contains("synth") && j.at("synth").contains("spec") && j.at("synth").at("spec").contains("seed")) {
      throw ConfigError("config: 'synth.spec.seed' is not accepted; use the top-level seed");
    }
    if (j.contains("precision")) c.precision = num::precision_from_string(j.at("precision").get<std::string>());
    if (j.contains("synth")) {
      const auto& s = j.at("synth");
      check_known_keys(s, {"spec", "train_sentences", "test_sentences", "mine_sentences", "mine_distractors"},
                       "synth");
      if (s.contains("spec")) c.synth.spec = corpus::SynthSpec::from_json(s.at("spec"));
      c.synth.train_sentences = s.value("train_sentences", c.synth.train_sentences);
      c.synth.test_sentences = s.value("test_sentences", c.synth.test_sentences);
      c.synth.mine_sentences = s.value("mine_sentences", c.synth.mine_sentences);
      c.synth.mine_distractors = s.value("mine_distractors", c.synth.mine_distractors);
    }
    if (j.contains("bpe")) {
      const auto& b = j.at("bpe");
      check_known_keys(b, {"merges", "vocab_size"}, "bpe");
      c.bpe.merges = b.value("merges", c.bpe.merges);
      c.bpe.vocab_size = b.value("vocab_size", c.bpe.vocab_size);
    }
    if (j.contains("model")) {
      const auto& m = j.at("model");
      check_known_keys(m, {"embed", "hidden"}, "model");
      c.embed_dim = m.value("embed", c.embed_dim);
      c.hidden_dim = m.value("hidden", c.hidden_dim);
    }
    if (j.contains("train")) c.train = nmt::TrainConfig::from_json(j.at("train"));
    if (j.contains("checkpoint") && !j.at("checkpoint").is_null()) {
      c.checkpoint = resolve(j.at("checkpoint").get<std::string>(), base);
    }
    if (j.contains("stats")) {
      const auto& s = j.at("stats");
      check_known_keys(s, {"tag", "pooling"}, "stats");
      c.stats.tag = s.value("tag", c.stats.tag);
      if (s.contains("pooling")) c.stats.pooling = sim::pooling_from_string(s.at("pooling").get<std::string>());
    }
    if (j.contains("project")) {
      const auto& p = j.at("project");
      check_known_keys(p, {"method", "per_language", "perplexity", "iterations", "exaggeration_iters",
                           "exaggeration", "learning_rate"},
                       "project");
      if (p.contains("method")) c.project.method = sim::projection_from_string(p.at("method").get<std::string>());
      c.project.per_language = p.value("per_language", c.project.per_language);
      c.project.tsne.perplexity = p.value("perplexity", c.project.tsne.perplexity);
      c.project.tsne.iterations = p.value("iterations", c.project.tsne.iterations);
      c.project.tsne.exaggeration_iters = p.value("exaggeration_iters", c.project.tsne.exaggeration_iters);
      c.project.tsne.exaggeration = p.value("exaggeration", c.project.tsne.exaggeration);
      c.project.tsne.learning_rate = p.value("learning_rate", c.project.tsne.learning_rate);
    }
    if (j.contains("mining")) {
      const auto& m = j.at("mining");
      check_known_keys(m, {"src", "tgt", "split", "cv_folds", "mine_split"}, "mining");
      c.mining.src = m.value("src", c.mining.src);
      c.mining.tgt = m.value("tgt", c.mining.tgt);
      if (m.contains("split")) c.mining.split = m.at("split").get<std::array<double, 3>>();
      c.mining.cv_folds = m.value("cv_folds", c.mining.cv_folds);
      c.mining.mine_split = m.value("mine_split", c.mining.mine_split);
    }
    if (j.contains("scenario")) c.scenario = feat::scenario_from_string(j.at("scenario").get<std::string>());
    if (j.contains("classifier")) c.classifier = classifier_from_string(j.at("classifier").get<std::string>());
    if (j.contains("gb")) c.gb = cls::GbConfig::from_json(j.at("gb"));
    if (j.contains("svm")) c.svm = cls::SvmConfig::from_json(j.at("svm"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.paths.corpus = resolve(c.paths.corpus, base);
  c.paths.models = resolve(c.paths.models, base);
  c.paths.out = resolve(c.paths.out, base);
  c.validate();
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ConfigError("config file not found: " + path.string());
  json j;
  try {
    j = json::parse(corpus::read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("config " + path.string() + ": " + e.what());
  }
  return PipelineConfig::from_json(j, path.parent_path());
}

void apply(PipelineConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.checkpoint) cfg.checkpoint = *o.checkpoint;
  if (o.scenario) cfg.scenario = feat::scenario_from_string(*o.scenario);
  if (o.model) cfg.classifier = classifier_from_string(*o.model);
  if (o.out) cfg.paths.out = *o.out;
  cfg.validate();
}

}  // namespace bitext::pipeline
