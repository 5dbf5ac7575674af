#include "bitext/features/pair_features.hpp"

#include "bitext/error.hpp"
#include "bitext/features/surface.hpp"

namespace bitext::feat {

Scenario scenario_from_string(const std::string& s) {
  if (s == "ctx") return Scenario::ctx;
  if (s == "comp") return Scenario::comp;
  if (s == "all") return Scenario::all;
  throw ConfigError("unknown scenario '" + s + "' (expected ctx, comp or all)");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::ctx: return "ctx";
    case Scenario::comp: return "comp";
    case Scenario::all: return "all";
  }
  return "ctx";
}

PairFeatures assemble(std::string_view s, std::string_view t, const LengthModel& lm,
                      std::optional<double> ctx_cos) {
  const auto c = count_features(s, t);
  PairFeatures f;
  f.ngram_cos = char_ngram_similarity(s, t);
  f.cognate_cos = pseudo_cognate_similarity(s, t);
  f.src_tokens = static_cast<double>(c.src_tokens);
  f.tgt_tokens = static_cast<double>(c.tgt_tokens);
  f.src_chars = static_cast<double>(c.src_chars);
  f.tgt_chars = static_cast<double>(c.tgt_chars);
  f.length_factor = length_factor(lm, s, t);
  f.ctx_cos = ctx_cos;
  return f;
}

std::vector<double> to_vector(const PairFeatures& f, Scenario scenario) {
  if (scenario != Scenario::comp && !f.ctx_cos) {
    throw UsageError("scenario " + to_string(scenario) + " needs the embedding cosine feature");
  }
  if (scenario == Scenario::ctx) return {*f.ctx_cos};
  std::vector<double> v{f.ngram_cos, f.cognate_cos, f.src_tokens, f.tgt_tokens,
                        f.src_chars, f.tgt_chars,   f.length_factor};
  if (scenario == Scenario::all) v.push_back(*f.ctx_cos);
  return v;
}

std::vector<std::string> feature_names(Scenario scenario) {
  if (scenario == Scenario::ctx) return {"ctx_cos"};
  std::vector<std::string> v{"ngram_cos", "cognate_cos", "src_tokens",   "tgt_tokens",
                             "src_chars", "tgt_chars",   "length_factor"};
  if (scenario == Scenario::all) v.push_back("ctx_cos");
  return v;
}

std::size_t feature_count(Scenario scenario) { return feature_names(scenario).size(); }

}  // namespace bitext::feat
