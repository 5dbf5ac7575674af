#include "bitext/classify/ensemble.hpp"

#include "bitext/error.hpp"

namespace bitext::cls {

EnsembleModel::EnsembleModel(std::vector<std::shared_ptr<const Classifier>> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw UsageError("ensemble needs at least one member");
  for (const auto& m : members_) {
    if (!m) throw UsageError("ensemble member is null");
    if (m->arity() != members_.front()->arity()) {
      throw UsageError("ensemble members disagree on feature arity (" + std::to_string(m->arity()) +
                       " vs " + std::to_string(members_.front()->arity()) + ")");
    }
  }
}

double EnsembleModel::predict_proba(std::span<const double> x) const {
  check_arity(x);
  double sum = 0.0;
  for (const auto& m : members_) sum += m->predict_proba(x);
  return sum / static_cast<double>(members_.size());
}

nlohmann::json EnsembleModel::to_json() const {
  auto members = nlohmann::json::array();
  for (const auto& m : members_) members.push_back(m->to_json());
  return {{"kind", kind()}, {"members", members}};
}

}  // namespace bitext::cls
