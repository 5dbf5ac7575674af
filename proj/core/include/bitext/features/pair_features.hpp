#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bitext/features/length_model.hpp"

namespace bitext::feat {

enum class Scenario { ctx, comp, all };

Scenario scenario_from_string(const std::string& s);
std::string to_string(Scenario s);

struct PairFeatures {
  double ngram_cos = 0.0;
  double cognate_cos = 0.0;
  double src_tokens = 0.0;
  double tgt_tokens = 0.0;
  double src_chars = 0.0;
  double tgt_chars = 0.0;
  double length_factor = 0.0;
  std::optional<double> ctx_cos;

  friend bool operator==(const PairFeatures&, const PairFeatures&) = default;
};

// Surface features always; ctx_cos is stored when supplied.
PairFeatures assemble(std::string_view s, std::string_view t, const LengthModel& lm,
                      std::optional<double> ctx_cos = std::nullopt);

// Classifier input for a scenario: ctx -> [ctx_cos]; comp -> the 7 surface
// values; all -> the 7 followed by ctx_cos. UsageError if ctx_cos is needed
// but absent.
std::vector<double> to_vector(const PairFeatures& f, Scenario scenario);

std::vector<std::string> feature_names(Scenario scenario);
std::size_t feature_count(Scenario scenario);

}  // namespace bitext::feat
