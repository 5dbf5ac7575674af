#include "bitext/numkit/param.hpp"

#include <cmath>

namespace bitext::num {

template <typename Real>
void adadelta_step(Param<Real>& p, const AdadeltaConfig& cfg) {
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0) || !(cfg.eps > 0.0)) {
    throw ParameterError("adadelta: require 0 < rho < 1 and eps > 0");
  }
  if (!p.grad.all_finite()) throw DivergenceError("adadelta: non-finite gradient in " + p.name);

  const Real rho = static_cast<Real>(cfg.rho);
  const Real one_minus_rho = static_cast<Real>(1.0 - cfg.rho);
  const Real eps = static_cast<Real>(cfg.eps);
  const Real lr = static_cast<Real>(cfg.lr);

  auto value = p.value.values();
  auto grad = p.grad.values();
  auto eg2 = p.mean_sq_grad.values();
  auto ex2 = p.mean_sq_update.values();
  for (std::size_t i = 0; i < value.size(); ++i) {
    const Real g = grad[i];
    eg2[i] = rho * eg2[i] + one_minus_rho * g * g;
    const Real delta = -std::sqrt(ex2[i] + eps) / std::sqrt(eg2[i] + eps) * g;
    ex2[i] = rho * ex2[i] + one_minus_rho * delta * delta;
    value[i] += lr * delta;
    grad[i] = Real(0);
  }
}

template <typename Real>
double clip_global_norm(std::span<Param<Real>* const> params, double max_norm) {
  double sq = 0.0;
  for (const auto* p : params) {
    for (Real g : p->grad.values()) sq += static_cast<double>(g) * static_cast<double>(g);
  }
  const double norm = std::sqrt(sq);
  if (std::isfinite(norm) && norm > max_norm && norm > 0.0) {
    const Real scale = static_cast<Real>(max_norm / norm);
    for (auto* p : params) {
      for (Real& g : p->grad.values()) g *= scale;
    }
  }
  return norm;
}

template struct Param<float>;
template struct Param<double>;
template void adadelta_step(Param<float>&, const AdadeltaConfig&);
template void adadelta_step(Param<double>&, const AdadeltaConfig&);
template double clip_global_norm(std::span<Param<float>* const>, double);
template double clip_global_norm(std::span<Param<double>* const>, double);

}  // namespace bitext::num
