#pragma once

#include <span>

#include <nlohmann/json.hpp>

namespace bitext::cls {

struct Prf1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// UsageError on a length mismatch.
Confusion confusion(std::span<const int> predictions, std::span<const int> gold);

// Ratios with a zero denominator are 0.
Prf1 prf1(std::span<const int> predictions, std::span<const int> gold);
Prf1 prf1(const Confusion& c);

double accuracy(std::span<const int> predictions, std::span<const int> gold);

// Mean binomial deviance -2 log L / n for raw scores F (p = sigmoid(F)).
double binomial_deviance(std::span<const double> scores, std::span<const int> labels);

nlohmann::json to_json(const Prf1& m);

}  // namespace bitext::cls
