#include "bitext/simspace/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "bitext/numkit/rng.hpp"

namespace bitext::sim {

ProjectionMethod projection_from_string(const std::string& s) {
  if (s == "pca") return ProjectionMethod::pca;
  if (s == "tsne") return ProjectionMethod::tsne;
  throw ConfigError("unknown projection method '" + s + "' (expected pca or tsne)");
}

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMat> as_eigen(const num::Matrix& m) {
  return Eigen::Map<const RowMat>(m.data(), static_cast<Eigen::Index>(m.rows()),
                                  static_cast<Eigen::Index>(m.cols()));
}

void require_points(const num::Matrix& data) {
  if (data.rows() < 3) {
    throw EmptyInputError("project_2d: need at least 3 embeddings, got " + std::to_string(data.rows()));
  }
  if (data.cols() == 0) throw EmptyInputError("project_2d: zero-dimensional embeddings");
  if (!data.all_finite()) throw ParameterError("project_2d: non-finite input");
}

std::vector<double> squared_distances(const num::Matrix& x) {
  const std::size_t n = x.rows();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      auto a = x.row(i);
      auto b = x.row(j);
      for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
      d[i * n + j] = d[j * n + i] = s;
    }
  }
  return d;
}

// Row-conditional Gaussians matched to the target perplexity by bisection on
// the precision, then symmetrised and normalised to sum 1.
std::vector<double> joint_probabilities(const num::Matrix& x, double perplexity) {
  const std::size_t n = x.rows();
  const auto d = squared_distances(x);
  const double target = std::log(perplexity);
  std::vector<double> p(n * n, 0.0);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
      double dmin = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) dmin = std::min(dmin, d[i * n + j]);
      }
      double sum = 0.0, wsum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row[j] = j == i ? 0.0 : std::exp(-beta * (d[i * n + j] - dmin));
        sum += row[j];
        wsum += row[j] * (d[i * n + j] - dmin);
      }
      const double h = std::log(sum) + beta * wsum / sum;
      if (std::abs(h - target) < 1e-10) break;
      if (h > target) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
    double sum = 0.0;
    for (double v : row) sum += v;
    for (std::size_t j = 0; j < n; ++j) p[i * n + j] = row[j] / sum;
  }
  const double denom = 2.0 * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = std::max((p[i * n + j] + p[j * n + i]) / denom, 1e-12);
      p[i * n + j] = p[j * n + i] = s;
    }
    p[i * n + i] = 0.0;
  }
  return p;
}

struct Affinity {
  std::vector<double> num;  // (1 + |yi - yj|^2)^-1
  double z = 0.0;
};

Affinity student_t(const std::vector<double>& y, std::size_t n) {
  Affinity a;
  a.num.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = y[2 * i] - y[2 * j], dy = y[2 * i + 1] - y[2 * j + 1];
      const double v = 1.0 / (1.0 + dx * dx + dy * dy);
      a.num[i * n + j] = a.num[j * n + i] = v;
      a.z += 2.0 * v;
    }
  }
  return a;
}

double kl_divergence(const std::vector<double>& p, const Affinity& a, std::size_t n) {
  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double pij = p[i * n + j];
      const double qij = std::max(a.num[i * n + j] / a.z, 1e-300);
      kl += pij * std::log(pij / qij);
    }
  }
  return kl;
}

void gradient(const std::vector<double>& p, const Affinity& a, const std::vector<double>& y,
              std::size_t n, double exaggeration, std::vector<double>& g) {
  std::fill(g.begin(), g.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double num = a.num[i * n + j];
      const double m = 4.0 * (exaggeration * p[i * n + j] - num / a.z) * num;
      g[2 * i] += m * (y[2 * i] - y[2 * j]);
      g[2 * i + 1] += m * (y[2 * i + 1] - y[2 * j + 1]);
    }
  }
}

void center(std::vector<double>& y, std::size_t n) {
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cx += y[2 * i];
    cy += y[2 * i + 1];
  }
  cx /= static_cast<double>(n);
  cy /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[2 * i] -= cx;
    y[2 * i + 1] -= cy;
  }
}

}  // namespace

Projection pca_2d(const num::Matrix& data) {
  require_points(data);
  const auto x = as_eigen(data);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(data.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw EvaluationError("pca_2d: eigendecomposition failed");

  const Eigen::Index d = cov.rows();
  Projection out;
  out.points = num::Matrix(data.rows(), 2);
  for (Eigen::Index axis = 0; axis < std::min<Eigen::Index>(2, d); ++axis) {
    Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - axis);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    const Eigen::VectorXd proj = centered * v;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      out.points(i, static_cast<std::size_t>(axis)) = proj(static_cast<Eigen::Index>(i));
    }
  }
  return out;
}

Projection tsne_2d(const num::Matrix& data, const TsneOptions& options) {
  require_points(data);
  const std::size_t n = data.rows();
  const double max_perp = static_cast<double>(n - 1) / 3.0;
  const double perplexity = options.perplexity > 0.0 ? options.perplexity : std::min(30.0, max_perp);
  if (perplexity > max_perp) {
    throw ParameterError("tsne: perplexity " + std::to_string(perplexity) + " exceeds (n-1)/3 = " +
                         std::to_string(max_perp));
  }
  if (!(perplexity >= 1.0)) throw ParameterError("tsne: perplexity must be at least 1");
  if (!(options.learning_rate > 0.0)) throw ParameterError("tsne: learning rate must be positive");

  const auto p = joint_probabilities(data, perplexity);
  num::Rng rng(options.seed);
  std::vector<double> y(2 * n);
  for (auto& v : y) v = 1e-2 * rng.normal();
  std::vector<double> vel(2 * n, 0.0), gains(2 * n, 1.0), g(2 * n), trial(2 * n);

  Projection out;
  out.kl_history.reserve(options.iterations);
  Affinity aff = student_t(y, n);
  double kl = kl_divergence(p, aff, n);
  double step_scale = 1.0;

  for (std::size_t it = 0; it < options.iterations; ++it) {
    const bool exaggerate = it < options.exaggeration_iters;
    const double momentum = it < 250 ? 0.5 : 0.8;
    gradient(p, aff, y, n, exaggerate ? options.exaggeration : 1.0, g);
    for (std::size_t k = 0; k < 2 * n; ++k) {
      const bool same = (g[k] > 0.0) == (vel[k] > 0.0);
      gains[k] = std::max(same ? gains[k] * 0.8 : gains[k] + 0.2, 0.01);
    }
    if (exaggerate) {
      for (std::size_t k = 0; k < 2 * n; ++k) {
        vel[k] = momentum * vel[k] - options.learning_rate * gains[k] * g[k];
        y[k] += vel[k];
      }
      center(y, n);
      aff = student_t(y, n);
      kl = kl_divergence(p, aff, n);
    } else {
      // Past the exaggeration phase every step must lower the true objective:
      // a rejected step drops the momentum and retries with half the rate.
      bool accepted = false;
      for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
        std::vector<double> v2(2 * n);
        for (std::size_t k = 0; k < 2 * n; ++k) {
          const double mom = attempt == 0 ? momentum * vel[k] : 0.0;
          v2[k] = mom - step_scale * options.learning_rate * gains[k] * g[k];
          trial[k] = y[k] + v2[k];
        }
        center(trial, n);
        Affinity cand = student_t(trial, n);
        const double cand_kl = kl_divergence(p, cand, n);
        if (cand_kl <= kl) {
          y.swap(trial);
          vel.swap(v2);
          aff = std::move(cand);
          kl = cand_kl;
          accepted = true;
          step_scale = std::min(1.0, step_scale * 1.1);
        } else {
          step_scale *= 0.5;
          std::fill(gains.begin(), gains.end(), 1.0);
        }
      }
      if (!accepted) std::fill(vel.begin(), vel.end(), 0.0);
    }
    out.kl_history.push_back(kl);
  }

  out.points = num::Matrix(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    out.points(i, 0) = y[2 * i];
    out.points(i, 1) = y[2 * i + 1];
  }
  return out;
}

Projection project_2d(const num::Matrix& data, ProjectionMethod method, const TsneOptions& options) {
  return method == ProjectionMethod::pca ? pca_2d(data) : tsne_2d(data, options);
}

}  // namespace bitext::sim
