#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "bitext/error.hpp"
#include "bitext/pipeline/config.hpp"
#include "bitext/pipeline/run.hpp"

namespace bp = bitext::pipeline;

int main(int argc, char** argv) {
  CLI::App app{"Parallel sentence identification with multilingual NMT context vectors"};
  app.require_subcommand(1, 1);

  std::string config_path;
  bp::Overrides flags;
  std::uint64_t seed = 0;
  std::string checkpoint, scenario, model, out;

  const std::map<std::string, std::string> about{
      {"synth", "generate synthetic multilingual corpora"},
      {"bpe", "learn BPE merges and the shared vocabulary"},
      {"train", "train the multilingual NMT model, writing checkpoints"},
      {"embed", "dump sentence embeddings of the test set"},
      {"stats", "similarity statistics per checkpoint and language pair"},
      {"project", "2D projection of sentence embeddings"},
      {"features", "pair features for the mining corpus"},
      {"fit", "fit a classifier for one scenario"},
      {"mine", "classify candidate pairs"},
      {"eval", "precision, recall and F1 against the gold pairs"}};
  app.footer("Run the stages in the order listed; each reads only files written by earlier stages.");
  for (const auto& name : bp::subcommands()) {
    const auto it = about.find(name);
    auto* sub = app.add_subcommand(name, it == about.end() ? std::string() : it->second);
    sub->add_option("--config", config_path, "JSON pipeline config");
    sub->add_option("--seed", seed, "Seed for every stochastic step");
    sub->add_option("--checkpoint", checkpoint, "NMT checkpoint (default: latest)");
    sub->add_option("--scenario", scenario, "Feature scenario")->check(CLI::IsMember({"ctx", "comp", "all"}));
    sub->add_option("--model", model, "Classifier")->check(CLI::IsMember({"thrs", "gb", "svm", "ens"}));
    sub->add_option("--out", out, "Output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();
  if (sub->count("--seed")) flags.seed = seed;
  if (sub->count("--checkpoint")) flags.checkpoint = checkpoint;
  if (sub->count("--scenario")) flags.scenario = scenario;
  if (sub->count("--model")) flags.model = model;
  if (sub->count("--out")) flags.out = out;

  bp::PipelineConfig cfg;
  try {
    cfg = config_path.empty() ? bp::PipelineConfig{} : bp::load_config(config_path);
    bp::apply(cfg, flags);
  } catch (const std::exception& e) {
    std::cerr << stage << ": config: " << e.what() << "\n";
    return bp::exit_code(e);
  }
  return bp::run(stage, cfg, std::cout, std::cerr);
}
