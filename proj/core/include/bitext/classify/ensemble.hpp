#pragma once

#include <memory>
#include <vector>

#include "bitext/classify/classifier.hpp"

namespace bitext::cls {

// Soft voting: the unweighted mean of member probabilities.
class EnsembleModel final : public Classifier {
 public:
  // UsageError for an empty member list or members of different arity.
  explicit EnsembleModel(std::vector<std::shared_ptr<const Classifier>> members);

  const std::vector<std::shared_ptr<const Classifier>>& members() const noexcept { return members_; }

  std::string kind() const override { return "ens"; }
  std::size_t arity() const override { return members_.front()->arity(); }
  double predict_proba(std::span<const double> x) const override;
  nlohmann::json to_json() const override;

 private:
  std::vector<std::shared_ptr<const Classifier>> members_;
};

}  // namespace bitext::cls
