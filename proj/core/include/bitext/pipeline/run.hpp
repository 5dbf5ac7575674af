#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bitext/pipeline/config.hpp"

namespace bitext::pipeline {

const std::vector<std::string>& subcommands();

// Runs one stage; throws on failure. UsageError for an unknown subcommand.
void execute(const std::string& subcommand, const PipelineConfig& cfg, std::ostream& log);

// 0 on success, 1 for validation errors, 2 for runtime failures. The message
// written to `err` names the stage.
int run(const std::string& subcommand, const PipelineConfig& cfg, std::ostream& log, std::ostream& err);

// Exit code for an exception escaping a stage.
int exit_code(const std::exception& e) noexcept;

}  // namespace bitext::pipeline
