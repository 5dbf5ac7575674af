#pragma once

#include <span>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

namespace bitext::feat {

inline constexpr std::size_t kMinLengthModelPairs = 100;

struct LengthModel {
  double mu = 0.0;
  double sigma = 0.0;
  std::string src_lang;
  std::string tgt_lang;

  nlohmann::json to_json() const;
  static LengthModel from_json(const nlohmann::json& j);
  friend bool operator==(const LengthModel&, const LengthModel&) = default;
};

// Mean and population std of |t|/|s| in characters. FittingError for fewer
// than 100 pairs, an empty source side or zero spread.
LengthModel fit_length_model(std::span<const std::pair<std::string, std::string>> pairs,
                             std::string src_lang = {}, std::string tgt_lang = {});

// exp(-0.5 ((|t|/|s| - mu) / sigma)^2). EvaluationError on an empty source.
double length_factor(const LengthModel& model, std::string_view s, std::string_view t);

}  // namespace bitext::feat
