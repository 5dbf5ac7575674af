#include "bitext/classify/metrics.hpp"

#include <cmath>

#include "bitext/error.hpp"

namespace bitext::cls {

Confusion confusion(std::span<const int> predictions, std::span<const int> gold) {
  if (predictions.size() != gold.size()) {
    throw UsageError("metrics: " + std::to_string(predictions.size()) + " predictions for " +
                     std::to_string(gold.size()) + " gold labels");
  }
  Confusion c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool p = predictions[i] == 1, g = gold[i] == 1;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

Prf1 prf1(const Confusion& c) {
  auto ratio = [](double a, double b) { return b == 0.0 ? 0.0 : a / b; };
  Prf1 m;
  m.precision = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
  m.recall = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
  m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
  return m;
}

Prf1 prf1(std::span<const int> predictions, std::span<const int> gold) {
  return prf1(confusion(predictions, gold));
}

double accuracy(std::span<const int> predictions, std::span<const int> gold) {
  const auto c = confusion(predictions, gold);
  if (gold.empty()) return 0.0;
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(gold.size());
}

double binomial_deviance(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw UsageError("binomial_deviance: mismatched or empty inputs");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double f = scores[i];
    // log(1 + e^f) - y f, computed without overflow
    const double softplus = f > 0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
    sum += softplus - labels[i] * f;
  }
  return 2.0 * sum / static_cast<double>(scores.size());
}

nlohmann::json to_json(const Prf1& m) { return {{"P", m.precision}, {"R", m.recall}, {"F1", m.f1}}; }

}  // namespace bitext::cls
