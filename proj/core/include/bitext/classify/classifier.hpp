#pragma once

#include <span>
#include <string>

#include <nlohmann/json.hpp>

namespace bitext::cls {

class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string kind() const = 0;
  virtual std::size_t arity() const = 0;
  // P(parallel | x) in (0, 1). UsageError when x has the wrong arity.
  virtual double predict_proba(std::span<const double> x) const = 0;
  virtual int predict(std::span<const double> x) const { return predict_proba(x) >= 0.5 ? 1 : 0; }
  virtual nlohmann::json to_json() const = 0;

 protected:
  void check_arity(std::span<const double> x) const;
};

}  // namespace bitext::cls
