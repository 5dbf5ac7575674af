#include "bitext/numkit/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace bitext::num {

GradCheckResult finite_diff_check(std::span<Param<double>* const> params,
                                  const std::function<double()>& loss, double h) {
  if (!(h > 0.0)) throw ParameterError("finite_diff_check: h must be positive");
  auto eval = [&] {
    const double v = loss();
    if (!std::isfinite(v)) throw EvaluationError("finite_diff_check: non-finite loss");
    return v;
  };

  GradCheckResult result;
  for (auto* p : params) {
    auto values = p->value.values();
    auto grads = p->grad.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + h;
      const double up = eval();
      values[i] = saved - h;
      const double down = eval();
      values[i] = saved + 2.0 * h;
      const double up2 = eval();
      values[i] = saved - 2.0 * h;
      const double down2 = eval();
      values[i] = saved;

      const double numeric = (8.0 * (up - down) - (up2 - down2)) / (12.0 * h);
      const double analytic = grads[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      const double err = std::abs(analytic - numeric) / denom;
      ++result.entries_checked;
      if (err > result.max_relative_error) {
        result.max_relative_error = err;
        result.worst_param = p->name;
        result.worst_index = i;
      }
    }
  }
  return result;
}

}  // namespace bitext::num
