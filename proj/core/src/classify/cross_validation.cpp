#include "bitext/classify/cross_validation.hpp"

#include "bitext/error.hpp"
#include "bitext/numkit/rng.hpp"

namespace bitext::cls {

nlohmann::json CvResult::to_json() const {
  auto f = nlohmann::json::array();
  for (const auto& m : folds) {
    f.push_back({{"rows", m.rows}, {"accuracy", m.accuracy}, {"P", m.scores.precision},
                 {"R", m.scores.recall}, {"F1", m.scores.f1}});
  }
  return {{"folds", f},
          {"mean_accuracy", mean_accuracy},
          {"mean", cls::to_json(mean)},
          {"pooled_accuracy", pooled_accuracy},
          {"pooled", cls::to_json(pooled)}};
}

std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw PartitionError("cross-validation needs k >= 2, got " + std::to_string(k));
  if (k > labels.size()) {
    throw PartitionError("cannot form " + std::to_string(k) + " folds from " + std::to_string(labels.size()) + " rows");
  }
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] == 1 ? 1 : 0].push_back(i);
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < 2) {
      throw PartitionError("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                           " rows; stratification needs at least 2");
    }
  }
  num::Rng rng(seed);
  std::vector<std::size_t> fold(labels.size());
  std::size_t next = 0;
  for (auto& rows : by_class) {
    rng.shuffle(std::span<std::size_t>(rows));
    for (auto r : rows) fold[r] = next++ % k;
  }
  return fold;
}

CvResult kfold_cv(const Dataset& data, std::size_t k, const FitFn& fit, std::uint64_t seed) {
  data.validate();
  const auto fold = stratified_folds(data.y, k, seed);
  CvResult res;
  std::vector<int> all_pred(data.rows()), all_gold(data.rows());
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < data.rows(); ++i) (fold[i] == f ? test : train).push_back(i);
    const auto model = fit(data.subset(train));
    std::vector<int> pred, gold;
    for (auto i : test) {
      pred.push_back(model->predict(data.x[i]));
      gold.push_back(data.y[i]);
      all_pred[pos] = pred.back();
      all_gold[pos++] = gold.back();
    }
    FoldMetrics m{test.size(), accuracy(pred, gold), prf1(pred, gold)};
    res.mean_accuracy += m.accuracy;
    res.mean.precision += m.scores.precision;
    res.mean.recall += m.scores.recall;
    res.mean.f1 += m.scores.f1;
    res.folds.push_back(m);
  }
  const double kk = static_cast<double>(k);
  res.mean_accuracy /= kk;
  res.mean.precision /= kk;
  res.mean.recall /= kk;
  res.mean.f1 /= kk;
  res.pooled_accuracy = accuracy(all_pred, all_gold);
  res.pooled = prf1(all_pred, all_gold);
  return res;
}

}  // namespace bitext::cls
