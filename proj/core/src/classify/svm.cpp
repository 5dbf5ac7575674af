#include "bitext/classify/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bitext/error.hpp"

namespace bitext::cls {

void SvmConfig::validate() const {
  if (!(c > 0.0)) throw ConfigError("svm: C must be positive");
  if (gamma < 0.0 || !std::isfinite(gamma)) throw ConfigError("svm: gamma must be non-negative");
  if (!(tolerance > 0.0)) throw ConfigError("svm: tolerance must be positive");
}

nlohmann::json SvmConfig::to_json() const {
  return {{"C", c}, {"gamma", gamma}, {"tolerance", tolerance}, {"max_iter", max_iter}, {"seed", seed}};
}

SvmConfig SvmConfig::from_json(const nlohmann::json& j) {
  SvmConfig s;
  s.c = j.value("C", s.c);
  s.gamma = j.value("gamma", s.gamma);
  s.tolerance = j.value("tolerance", s.tolerance);
  s.max_iter = j.value("max_iter", s.max_iter);
  s.seed = j.value("seed", s.seed);
  return s;
}

namespace {

double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
  return std::exp(-gamma * d);
}

// Dual solver for min 0.5 a'Qa - e'a, 0 <= a <= C, y'a = 0, Q_ij = y_i y_j K_ij.
class Smo {
 public:
  Smo(const std::vector<std::vector<double>>& x, const std::vector<double>& y, double c, double gamma)
      : x_(x), y_(y), c_(c), gamma_(gamma), n_(x.size()), rows_(n_), alpha_(n_, 0.0), grad_(n_, -1.0) {}

  std::size_t solve(double eps, std::size_t max_iter) {
    std::size_t iter = 0;
    while (true) {
      int i = -1, j = -1;
      if (!select(eps, i, j)) break;
      if (++iter > max_iter) {
        throw ConvergenceError("svm: SMO did not reach KKT tolerance within " + std::to_string(max_iter) +
                                   " iterations",
                               static_cast<long>(max_iter));
      }
      update(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    return iter;
  }

  const std::vector<double>& alpha() const { return alpha_; }

  double bias() const {
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
    std::size_t free = 0;
    for (std::size_t t = 0; t < n_; ++t) {
      const double yg = y_[t] * grad_[t];
      if (upper(t)) {
        if (y_[t] < 0) ub = std::min(ub, yg);
        else lb = std::max(lb, yg);
      } else if (lower(t)) {
        if (y_[t] > 0) ub = std::min(ub, yg);
        else lb = std::max(lb, yg);
      } else {
        ++free;
        sum_free += yg;
      }
    }
    const double rho = free > 0 ? sum_free / static_cast<double>(free) : 0.5 * (ub + lb);
    return -rho;
  }

 private:
  static constexpr double kTau = 1e-12;

  bool upper(std::size_t t) const { return alpha_[t] >= c_; }
  bool lower(std::size_t t) const { return alpha_[t] <= 0.0; }

  // Kernel row, computed once and cached.
  const std::vector<double>& k_row(std::size_t i) {
    auto& r = rows_[i];
    if (r.empty()) {
      r.resize(n_);
      for (std::size_t t = 0; t < n_; ++t) r[t] = rbf(x_[i], x_[t], gamma_);
    }
    return r;
  }

  bool select(double eps, int& out_i, int& out_j) {
    double gmax = -std::numeric_limits<double>::infinity(), gmax2 = gmax;
    int gi = -1;
    for (std::size_t t = 0; t < n_; ++t) {
      if (y_[t] > 0) {
        if (!upper(t) && -grad_[t] >= gmax) {
          gmax = -grad_[t];
          gi = static_cast<int>(t);
        }
      } else if (!lower(t) && grad_[t] >= gmax) {
        gmax = grad_[t];
        gi = static_cast<int>(t);
      }
    }
    if (gi < 0) return false;
    const auto i = static_cast<std::size_t>(gi);
    const auto& ki = k_row(i);
    int gj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n_; ++t) {
      // Second-order gain; with K_ii = K_tt = 1 the curvature is 2 - 2 K_it.
      if (y_[t] > 0) {
        if (lower(t)) continue;
        const double diff = gmax + grad_[t];
        gmax2 = std::max(gmax2, grad_[t]);
        if (diff > 0) {
          const double quad = std::max(2.0 - 2.0 * ki[t], kTau);
          const double obj = -diff * diff / quad;
          if (obj <= best) {
            best = obj;
            gj = static_cast<int>(t);
          }
        }
      } else {
        if (upper(t)) continue;
        const double diff = gmax - grad_[t];
        gmax2 = std::max(gmax2, -grad_[t]);
        if (diff > 0) {
          const double quad = std::max(2.0 - 2.0 * ki[t], kTau);
          const double obj = -diff * diff / quad;
          if (obj <= best) {
            best = obj;
            gj = static_cast<int>(t);
          }
        }
      }
    }
    if (gmax + gmax2 < eps || gj < 0) return false;
    out_i = gi;
    out_j = gj;
    return true;
  }

  void update(std::size_t i, std::size_t j) {
    const auto& ki = k_row(i);
    const auto& kj = k_row(j);
    const double qij = y_[i] * y_[j] * ki[j];
    const double old_i = alpha_[i], old_j = alpha_[j];
    double& ai = alpha_[i];
    double& aj = alpha_[j];
    if (y_[i] != y_[j]) {
      const double quad = std::max(2.0 + 2.0 * qij, kTau);
      const double delta = (-grad_[i] - grad_[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) {
          aj = 0;
          ai = diff;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = -diff;
      }
      if (diff > 0) {
        if (ai > c_) {
          ai = c_;
          aj = c_ - diff;
        }
      } else if (aj > c_) {
        aj = c_;
        ai = c_ + diff;
      }
    } else {
      const double quad = std::max(2.0 - 2.0 * qij, kTau);
      const double delta = (grad_[i] - grad_[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c_) {
        if (ai > c_) {
          ai = c_;
          aj = sum - c_;
        }
      } else if (aj < 0) {
        aj = 0;
        ai = sum;
      }
      if (sum > c_) {
        if (aj > c_) {
          aj = c_;
          ai = sum - c_;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = sum;
      }
    }
    const double dai = ai - old_i, daj = aj - old_j;
    for (std::size_t t = 0; t < n_; ++t) {
      grad_[t] += y_[t] * (y_[i] * ki[t] * dai + y_[j] * kj[t] * daj);
    }
  }

  const std::vector<std::vector<double>>& x_;
  const std::vector<double>& y_;
  double c_, gamma_;
  std::size_t n_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> alpha_, grad_;
};

double platt_prob(double f, const PlattParams& p) {
  const double z = f * p.a + p.b;
  return z >= 0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
}

}  // namespace

PlattParams platt_fit(std::span<const double> dec, std::span<const int> labels) {
  if (dec.size() != labels.size()) throw UsageError("platt_fit: length mismatch");
  double prior1 = 0, prior0 = 0;
  for (int l : labels) (l == 1 ? prior1 : prior0) += 1.0;
  const double hi = (prior1 + 1.0) / (prior1 + 2.0), lo = 1.0 / (prior0 + 2.0);
  std::vector<double> t(dec.size());
  for (std::size_t i = 0; i < dec.size(); ++i) t[i] = labels[i] == 1 ? hi : lo;

  auto objective = [&](double a, double b) {
    double f = 0.0;
    for (std::size_t i = 0; i < dec.size(); ++i) {
      const double z = dec[i] * a + b;
      f += z >= 0 ? t[i] * z + std::log1p(std::exp(-z)) : (t[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return f;
  };

  PlattParams p{0.0, std::log((prior0 + 1.0) / (prior1 + 1.0))};
  double fval = objective(p.a, p.b);
  for (int it = 0; it < 100; ++it) {
    double h11 = 1e-12, h22 = 1e-12, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < dec.size(); ++i) {
      const double z = dec[i] * p.a + p.b;
      double pp, qq;
      if (z >= 0) {
        pp = std::exp(-z) / (1.0 + std::exp(-z));
        qq = 1.0 / (1.0 + std::exp(-z));
      } else {
        pp = 1.0 / (1.0 + std::exp(z));
        qq = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = pp * qq;
      h11 += dec[i] * dec[i] * d2;
      h22 += d2;
      h21 += dec[i] * d2;
      const double d1 = t[i] - pp;
      g1 += dec[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= 1e-10) {
      const double na = p.a + step * da, nb = p.b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        p = {na, nb};
        fval = nf;
        break;
      }
      step *= 0.5;
    }
    if (step < 1e-10) break;
  }
  return p;
}

double SvmModel::decision(std::span<const double> x) const {
  std::vector<double> z(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) z[k] = (x[k] - mean[k]) / scale[k];
  double f = bias;
  for (std::size_t s = 0; s < coef.size(); ++s) f += coef[s] * rbf(support.row(s), z, gamma);
  return f;
}

double SvmModel::predict_proba(std::span<const double> x) const {
  check_arity(x);
  return platt_prob(decision(x), PlattParams{platt_a, platt_b});
}

int SvmModel::predict(std::span<const double> x) const {
  check_arity(x);
  return decision(x) > 0.0 ? 1 : 0;
}

nlohmann::json SvmModel::to_json() const {
  return {{"kind", kind()},       {"arity", arity()},       {"C", c},
          {"gamma", gamma},       {"bias", bias},           {"platt_a", platt_a},
          {"platt_b", platt_b},   {"support_vectors", coef.size()},
          {"iterations", iterations}};
}

num::Container SvmModel::to_container() const {
  num::Container out;
  out.precision = num::Precision::f64;
  out.meta = to_json();
  out.add("mean", num::Matrix(1, mean.size(), mean));
  out.add("scale", num::Matrix(1, scale.size(), scale));
  out.add("support", support);
  out.add("coef", num::Matrix(1, coef.size(), coef));
  return out;
}

SvmModel SvmModel::from_container(const num::Container& c) {
  if (c.meta.value("kind", "") != "svm") throw ParseError("container does not hold an SVM model");
  SvmModel m;
  auto values = [](const num::Matrix& mat) { return std::vector<double>(mat.values().begin(), mat.values().end()); };
  m.mean = values(c.get<double>("mean"));
  m.scale = values(c.get<double>("scale"));
  m.support = c.get<double>("support");
  m.coef = values(c.get<double>("coef"));
  m.c = c.meta.at("C").get<double>();
  m.gamma = c.meta.at("gamma").get<double>();
  m.bias = c.meta.at("bias").get<double>();
  m.platt_a = c.meta.at("platt_a").get<double>();
  m.platt_b = c.meta.at("platt_b").get<double>();
  m.iterations = c.meta.value("iterations", std::size_t{0});
  if (m.scale.size() != m.mean.size() || m.coef.size() != m.support.rows() ||
      (m.support.rows() > 0 && m.support.cols() != m.mean.size())) {
    throw DimensionError("svm container: inconsistent tensor shapes");
  }
  return m;
}

SvmModel svm_fit(const Dataset& data, const SvmConfig& config) {
  config.validate();
  data.validate();
  data.require_both_classes("svm_fit");
  const std::size_t n = data.rows(), d = data.cols();
  if (d == 0) throw DimensionError("svm_fit: dataset has no features");

  SvmModel m;
  m.c = config.c;
  m.mean.assign(d, 0.0);
  m.scale.assign(d, 1.0);
  for (std::size_t k = 0; k < d; ++k) {
    double s = 0.0;
    for (const auto& row : data.x) s += row[k];
    m.mean[k] = s / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& row : data.x) ss += (row[k] - m.mean[k]) * (row[k] - m.mean[k]);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    m.scale[k] = sd > 0.0 ? sd : 1.0;
  }
  std::vector<std::vector<double>> z(n, std::vector<double>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) z[i][k] = (data.x[i][k] - m.mean[k]) / m.scale[k];
  }
  m.gamma = config.gamma > 0.0 ? config.gamma : 1.0 / static_cast<double>(d);

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = data.y[i] == 1 ? 1.0 : -1.0;
  const std::size_t max_iter = config.max_iter ? config.max_iter : std::max<std::size_t>(10'000'000, 100 * n);
  Smo smo(z, y, config.c, m.gamma);
  m.iterations = smo.solve(config.tolerance, max_iter);
  m.bias = smo.bias();

  std::vector<std::size_t> sv;
  for (std::size_t i = 0; i < n; ++i) {
    if (smo.alpha()[i] > 0.0) sv.push_back(i);
  }
  m.support = num::Matrix(sv.size(), d);
  m.coef.resize(sv.size());
  for (std::size_t s = 0; s < sv.size(); ++s) {
    std::copy(z[sv[s]].begin(), z[sv[s]].end(), m.support.row(s).begin());
    m.coef[s] = smo.alpha()[sv[s]] * y[sv[s]];
  }

  std::vector<double> dec(n);
  for (std::size_t i = 0; i < n; ++i) dec[i] = m.decision(data.x[i]);
  const auto p = platt_fit(dec, data.y);
  m.platt_a = p.a;
  m.platt_b = p.b;
  return m;
}

}  // namespace bitext::cls
