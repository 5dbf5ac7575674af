#include "bitext/pipeline/run.hpp"

#include <functional>
#include <map>

#include "bitext/error.hpp"
#include "bitext/pipeline/commands.hpp"

namespace bitext::pipeline {

namespace {

using Command = void (*)(const PipelineConfig&, std::ostream&);

const std::map<std::string, Command>& table() {
  static const std::map<std::string, Command> t{
      {"synth", cmd_synth},       {"bpe", cmd_bpe},   {"train", cmd_train},
      {"embed", cmd_embed},       {"stats", cmd_stats}, {"project", cmd_project},
      {"features", cmd_features}, {"fit", cmd_fit},   {"mine", cmd_mine},
      {"eval", cmd_eval}};
  return t;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"synth", "bpe",      "train", "embed", "stats",
                                              "project", "features", "fit",   "mine",  "eval"};
  return names;
}

void execute(const std::string& subcommand, const PipelineConfig& cfg, std::ostream& log) {
  const auto it = table().find(subcommand);
  if (it == table().end()) throw UsageError("unknown subcommand '" + subcommand + "'");
  it->second(cfg, log);
}

int exit_code(const std::exception& e) noexcept {
  if (dynamic_cast<const ValidationError*>(&e)) return 1;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return 1;
  return 2;
}

int run(const std::string& subcommand, const PipelineConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    execute(subcommand, cfg, log);
    return 0;
  } catch (const std::exception& e) {
    err << subcommand << ": " << e.what() << "\n";
    return exit_code(e);
  }
}

}  // namespace bitext::pipeline
