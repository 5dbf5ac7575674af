#include "bitext/classify/dataset.hpp"

#include <cmath>
#include <unordered_set>

#include "bitext/classify/classifier.hpp"
#include "bitext/error.hpp"

namespace bitext::cls {

std::size_t Dataset::positives() const {
  std::size_t n = 0;
  for (int v : y) n += (v == 1);
  return n;
}

void Dataset::add(std::string id, std::vector<double> features, int label) {
  ids.push_back(std::move(id));
  x.push_back(std::move(features));
  y.push_back(label);
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.feature_names = feature_names;
  out.x.reserve(rows.size());
  out.y.reserve(rows.size());
  out.ids.reserve(rows.size());
  for (std::size_t r : rows) {
    out.x.push_back(x.at(r));
    out.y.push_back(y.at(r));
    out.ids.push_back(ids.empty() ? std::to_string(r) : ids.at(r));
  }
  return out;
}

std::vector<double> Dataset::column(std::size_t c) const {
  std::vector<double> v;
  v.reserve(x.size());
  for (const auto& row : x) v.push_back(row.at(c));
  return v;
}

void Dataset::validate() const {
  if (x.size() != y.size() || (!ids.empty() && ids.size() != y.size())) {
    throw DimensionError("dataset: " + std::to_string(x.size()) + " feature rows, " +
                         std::to_string(y.size()) + " labels, " + std::to_string(ids.size()) + " ids");
  }
  const std::size_t arity = cols();
  for (std::size_t r = 0; r < x.size(); ++r) {
    if (x[r].size() != arity) {
      throw DimensionError("dataset row " + std::to_string(r) + " has " + std::to_string(x[r].size()) +
                           " features, expected " + std::to_string(arity));
    }
    for (double v : x[r]) {
      if (!std::isfinite(v)) throw ParameterError("dataset row " + std::to_string(r) + " has a non-finite feature");
    }
    if (y[r] != 0 && y[r] != 1) {
      throw ParameterError("dataset row " + std::to_string(r) + " has label " + std::to_string(y[r]));
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw IntegrityError("dataset: duplicate pair id '" + id + "'");
  }
}

void Dataset::require_both_classes(const std::string& who) const {
  const auto p = positives();
  if (p == 0 || p == rows()) {
    throw FittingError(who + ": training data must contain both classes (" + std::to_string(p) +
                       " positive of " + std::to_string(rows()) + ")");
  }
}

void Classifier::check_arity(std::span<const double> x) const {
  if (x.size() != arity()) {
    throw UsageError(kind() + " model expects " + std::to_string(arity()) + " features, got " +
                     std::to_string(x.size()));
  }
}

}  // namespace bitext::cls
