#pragma once

#include <functional>
#include <span>

#include "bitext/numkit/param.hpp"

namespace bitext::num {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  std::size_t entries_checked = 0;
};

// Compares the analytic gradients already stored in each Param::grad against
// the five-point central difference
//   (8 (L(+h) - L(-h)) - (L(+2h) - L(-2h))) / 12h
// of `loss`, entry by entry. The relative error denominator is max(|analytic|, |numeric|, 1e-8).
// `loss` must evaluate the objective from the current parameter values
// without touching the stored gradients. Throws EvaluationError if the loss
// is ever non-finite.
GradCheckResult finite_diff_check(std::span<Param<double>* const> params,
                                  const std::function<double()>& loss, double h);

}  // namespace bitext::num
