#pragma once

#include <cstdint>
#include <vector>

#include "bitext/classify/classifier.hpp"
#include "bitext/classify/dataset.hpp"
#include "bitext/numkit/container.hpp"
#include "bitext/numkit/matrix.hpp"

namespace bitext::cls {

struct SvmConfig {
  double c = 1.0;
  double gamma = 0.0;          // 0: 1 / (features x variance), variance is 1 after scaling
  double tolerance = 1e-3;     // KKT violation bound
  std::size_t max_iter = 0;    // 0: max(10^7, 100 n)
  std::uint64_t seed = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static SvmConfig from_json(const nlohmann::json& j);
};

class SvmModel final : public Classifier {
 public:
  SvmModel() = default;

  // Standardisation applied before the kernel.
  std::vector<double> mean;
  std::vector<double> scale;
  num::Matrix support;        // standardised support vectors
  std::vector<double> coef;   // alpha_i * y_i
  double bias = 0.0;          // decision = sum coef_i K(sv_i, x) + bias
  double gamma = 0.0;
  double c = 1.0;
  double platt_a = 0.0;
  double platt_b = 0.0;
  std::size_t iterations = 0;

  double decision(std::span<const double> x) const;

  std::string kind() const override { return "svm"; }
  std::size_t arity() const override { return mean.size(); }
  double predict_proba(std::span<const double> x) const override;
  // Sign of the decision value.
  int predict(std::span<const double> x) const override;
  // Scalars only; the support vectors live in the container.
  nlohmann::json to_json() const override;

  num::Container to_container() const;
  static SvmModel from_container(const num::Container& c);
};

// C-SVC with an RBF kernel solved by SMO using second-order working-set
// selection, then Platt scaling on the training decision values.
// ConvergenceError when max_iter is exhausted.
SvmModel svm_fit(const Dataset& data, const SvmConfig& config = {});

struct PlattParams {
  double a = 0.0;
  double b = 0.0;
};

// Sigmoid fit of P(y=1|f) = 1 / (1 + exp(a f + b)) by Newton's method with
// backtracking, on regularised targets.
PlattParams platt_fit(std::span<const double> decisions, std::span<const int> labels);

}  // namespace bitext::cls
