#include "bitext/features/length_model.hpp"

#include <cmath>

#include "bitext/error.hpp"
#include "bitext/features/surface.hpp"

namespace bitext::feat {

nlohmann::json LengthModel::to_json() const {
  return {{"mu", mu}, {"sigma", sigma}, {"src_lang", src_lang}, {"tgt_lang", tgt_lang}};
}

LengthModel LengthModel::from_json(const nlohmann::json& j) {
  LengthModel m;
  m.mu = j.at("mu").get<double>();
  m.sigma = j.at("sigma").get<double>();
  m.src_lang = j.value("src_lang", "");
  m.tgt_lang = j.value("tgt_lang", "");
  if (!(m.sigma > 0.0)) throw ParseError("length model: sigma must be positive");
  return m;
}

LengthModel fit_length_model(std::span<const std::pair<std::string, std::string>> pairs,
                             std::string src_lang, std::string tgt_lang) {
  if (pairs.size() < kMinLengthModelPairs) {
    throw FittingError("length model needs at least " + std::to_string(kMinLengthModelPairs) +
                       " parallel pairs, got " + std::to_string(pairs.size()));
  }
  std::vector<double> ratios;
  ratios.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto ls = char_length(pairs[i].first);
    if (ls == 0) throw FittingError("length model: empty source sentence in pair " + std::to_string(i));
    ratios.push_back(static_cast<double>(char_length(pairs[i].second)) / static_cast<double>(ls));
  }
  const double n = static_cast<double>(ratios.size());
  double mu = 0.0;
  for (double r : ratios) mu += r;
  mu /= n;
  double ss = 0.0;
  for (double r : ratios) ss += (r - mu) * (r - mu);
  const double sigma = std::sqrt(ss / n);
  if (!(sigma > 1e-12)) throw FittingError("length model: length ratios have zero spread");
  return LengthModel{mu, sigma, std::move(src_lang), std::move(tgt_lang)};
}

double length_factor(const LengthModel& model, std::string_view s, std::string_view t) {
  const auto ls = char_length(s);
  if (ls == 0) throw EvaluationError("length_factor: empty source sentence");
  if (!(model.sigma > 0.0)) throw EvaluationError("length_factor: model is not fitted");
  const double r = static_cast<double>(char_length(t)) / static_cast<double>(ls);
  const double z = (r - model.mu) / model.sigma;
  return std::exp(-0.5 * z * z);
}

}  // namespace bitext::feat
