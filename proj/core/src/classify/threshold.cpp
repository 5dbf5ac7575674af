#include "bitext/classify/threshold.hpp"

#include <algorithm>
#include <cmath>

#include "bitext/error.hpp"
#include "bitext/numkit/matrix.hpp"

namespace bitext::cls {

std::vector<double> threshold_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ParameterError("threshold grid step must be positive");
  if (hi < lo) std::swap(lo, hi);
  const auto k = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid(k + 1);
  for (std::size_t i = 0; i <= k; ++i) grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

double ThresholdModel::predict_proba(std::span<const double> x) const {
  check_arity(x);
  return num::sigmoid((x[0] - t_) / kThresholdSharpness);
}

int ThresholdModel::predict(std::span<const double> x) const {
  check_arity(x);
  return x[0] >= t_ ? 1 : 0;
}

nlohmann::json ThresholdModel::to_json() const {
  return {{"kind", kind()}, {"t", t_}, {"train_accuracy", accuracy_}, {"warning", warning_}};
}

ThresholdModel ThresholdModel::from_json(const nlohmann::json& j) {
  return ThresholdModel(j.at("t").get<double>(), j.value("train_accuracy", 0.0), j.value("warning", false));
}

ThresholdModel threshold_fit(std::span<const double> sims, std::span<const int> labels) {
  if (sims.size() != labels.size()) throw UsageError("threshold_fit: sims and labels differ in length");
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < sims.size(); ++i) {
    if (!std::isfinite(sims[i])) throw ParameterError("threshold_fit: non-finite similarity");
    (labels[i] == 1 ? pos : neg).push_back(sims[i]);
  }
  if (pos.empty() || neg.empty()) throw FittingError("threshold_fit: need both positive and negative examples");
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());

  const auto grid = threshold_grid(pos.front(), neg.back());
  const double n = static_cast<double>(sims.size());
  double best_t = grid.front();
  double best_acc = -1.0;
  for (double t : grid) {
    // positives with sim >= t and negatives with sim < t are correct
    const auto tp = pos.end() - std::lower_bound(pos.begin(), pos.end(), t);
    const auto tn = std::lower_bound(neg.begin(), neg.end(), t) - neg.begin();
    const double acc = static_cast<double>(tp + tn) / n;
    if (acc > best_acc) {
      best_acc = acc;
      best_t = t;
    }
  }
  return ThresholdModel(best_t, best_acc, best_acc <= 0.5);
}

ThresholdModel threshold_fit(const Dataset& data) {
  if (data.cols() != 1) {
    throw UsageError("threshold_fit: expects one similarity feature, got " + std::to_string(data.cols()));
  }
  return threshold_fit(std::span<const double>(data.column(0)), std::span<const int>(data.y));
}

}  // namespace bitext::cls
