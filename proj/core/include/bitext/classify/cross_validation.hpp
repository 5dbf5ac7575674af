#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "bitext/classify/classifier.hpp"
#include "bitext/classify/dataset.hpp"
#include "bitext/classify/metrics.hpp"

namespace bitext::cls {

using FitFn = std::function<std::unique_ptr<Classifier>(const Dataset&)>;

struct FoldMetrics {
  std::size_t rows = 0;
  double accuracy = 0.0;
  Prf1 scores;
};

struct CvResult {
  std::vector<FoldMetrics> folds;
  double mean_accuracy = 0.0;
  Prf1 mean;          // averaged over folds
  double pooled_accuracy = 0.0;
  Prf1 pooled;        // over all out-of-fold predictions

  nlohmann::json to_json() const;
};

// Fold index of every row. Each class is shuffled with the seed and dealt
// round-robin, continuing across classes. PartitionError when k < 2, k > rows
// or a class has fewer than two rows.
std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed);

CvResult kfold_cv(const Dataset& data, std::size_t k, const FitFn& fit, std::uint64_t seed);

}  // namespace bitext::cls
