#pragma once

#include <cstdint>
#include <vector>

#include "bitext/classify/classifier.hpp"
#include "bitext/classify/dataset.hpp"

namespace bitext::cls {

struct GbConfig {
  std::size_t rounds = 100;
  std::size_t depth = 3;
  double shrinkage = 0.1;
  std::uint64_t seed = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static GbConfig from_json(const nlohmann::json& j);
};

// Flat binary regression tree; node 0 is the root. Leaves have feature = -1.
struct RegressionTree {
  struct Node {
    int feature = -1;
    double threshold = 0.0;  // x[feature] <= threshold goes left
    int left = -1;
    int right = -1;
    double value = 0.0;
  };
  std::vector<Node> nodes;

  double predict(std::span<const double> x) const;
  std::size_t leaves() const;
  nlohmann::json to_json() const;  // nested nodes
  static RegressionTree from_json(const nlohmann::json& j);
};

class GbModel final : public Classifier {
 public:
  GbModel() = default;
  GbModel(std::size_t arity, double f0, double shrinkage, std::vector<RegressionTree> trees)
      : arity_(arity), f0_(f0), shrinkage_(shrinkage), trees_(std::move(trees)) {}

  double f0() const noexcept { return f0_; }
  double shrinkage() const noexcept { return shrinkage_; }
  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
  // Training deviance before the first round and after each round.
  const std::vector<double>& deviance_history() const noexcept { return deviance_; }
  void set_deviance_history(std::vector<double> d) { deviance_ = std::move(d); }

  double decision(std::span<const double> x) const;  // F0 + shrinkage * sum of trees

  std::string kind() const override { return "gb"; }
  std::size_t arity() const override { return arity_; }
  double predict_proba(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static GbModel from_json(const nlohmann::json& j);

 private:
  std::size_t arity_ = 0;
  double f0_ = 0.0;
  double shrinkage_ = 0.1;
  std::vector<RegressionTree> trees_;
  std::vector<double> deviance_;
};

// Binomial-deviance boosting: each round fits a least-squares tree to the
// residuals y - p and sets every leaf by one Newton step. A round whose tree
// would raise the training deviance is damped by halving until it does not.
GbModel gb_fit(const Dataset& data, const GbConfig& config = {});

}  // namespace bitext::cls
