#pragma once

#include <span>
#include <vector>

#include "bitext/classify/classifier.hpp"
#include "bitext/classify/dataset.hpp"

namespace bitext::cls {

inline constexpr double kThresholdStep = 0.005;
inline constexpr double kThresholdSharpness = 0.01;

// Candidate thresholds lo, lo + step, ... up to hi (inclusive within 1e-9
// steps).
std::vector<double> threshold_grid(double lo, double hi, double step = kThresholdStep);

// sim >= t is parallel. predict_proba is sigmoid((sim - t) / 0.01) only to
// provide a probability; predict() applies the hard rule.
class ThresholdModel final : public Classifier {
 public:
  ThresholdModel() = default;
  ThresholdModel(double t, double train_accuracy, bool warning)
      : t_(t), accuracy_(train_accuracy), warning_(warning) {}

  double threshold() const noexcept { return t_; }
  double train_accuracy() const noexcept { return accuracy_; }
  // Set when the best training accuracy is no better than chance.
  bool warning() const noexcept { return warning_; }

  std::string kind() const override { return "thrs"; }
  std::size_t arity() const override { return 1; }
  double predict_proba(std::span<const double> x) const override;
  int predict(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static ThresholdModel from_json(const nlohmann::json& j);

 private:
  double t_ = 0.0;
  double accuracy_ = 0.0;
  bool warning_ = false;
};

// Scans the grid between min(positive sims) and max(negative sims), in
// whichever order they fall, and keeps the most accurate threshold; ties go
// to the smallest. FittingError unless both classes are present.
ThresholdModel threshold_fit(std::span<const double> sims, std::span<const int> labels);
ThresholdModel threshold_fit(const Dataset& data);

}  // namespace bitext::cls
