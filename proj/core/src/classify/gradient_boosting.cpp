#include "bitext/classify/gradient_boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bitext/classify/metrics.hpp"
#include "bitext/error.hpp"
#include "bitext/numkit/matrix.hpp"

namespace bitext::cls {

void GbConfig::validate() const {
  if (depth == 0) throw ConfigError("gb: depth must be at least 1");
  if (!(shrinkage > 0.0 && shrinkage <= 1.0)) throw ConfigError("gb: shrinkage must lie in (0, 1]");
}

nlohmann::json GbConfig::to_json() const {
  return {{"rounds", rounds}, {"depth", depth}, {"shrinkage", shrinkage}, {"seed", seed}};
}

GbConfig GbConfig::from_json(const nlohmann::json& j) {
  GbConfig c;
  c.rounds = j.value("rounds", c.rounds);
  c.depth = j.value("depth", c.depth);
  c.shrinkage = j.value("shrinkage", c.shrinkage);
  c.seed = j.value("seed", c.seed);
  return c;
}

double RegressionTree::predict(std::span<const double> x) const {
  if (nodes.empty()) return 0.0;
  int i = 0;
  while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const auto& n = nodes[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(i)].value;
}

std::size_t RegressionTree::leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.feature < 0; }));
}

namespace {

nlohmann::json node_json(const RegressionTree& t, int i) {
  const auto& n = t.nodes[static_cast<std::size_t>(i)];
  if (n.feature < 0) return {{"value", n.value}};
  return {{"feature", n.feature},
          {"threshold", n.threshold},
          {"left", node_json(t, n.left)},
          {"right", node_json(t, n.right)}};
}

int node_from_json(RegressionTree& t, const nlohmann::json& j) {
  const int id = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  if (j.contains("value")) {
    t.nodes.back().value = j.at("value").get<double>();
    return id;
  }
  const int feature = j.at("feature").get<int>();
  const double threshold = j.at("threshold").get<double>();
  const int left = node_from_json(t, j.at("left"));
  const int right = node_from_json(t, j.at("right"));
  auto& n = t.nodes[static_cast<std::size_t>(id)];
  n.feature = feature;
  n.threshold = threshold;
  n.left = left;
  n.right = right;
  return id;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Best least-squares split of rows[begin, end) over every feature and every
// midpoint between distinct sorted values.
Split best_split(const Dataset& d, const std::vector<double>& r, std::vector<std::size_t>& rows) {
  Split best;
  const std::size_t n = rows.size();
  if (n < 2) return best;
  double total = 0.0;
  for (auto i : rows) total += r[i];
  const double base = total * total / static_cast<double>(n);
  std::vector<std::size_t> order(rows);
  for (std::size_t f = 0; f < d.cols(); ++f) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double xa = d.x[a][f], xb = d.x[b][f];
      return xa < xb || (xa == xb && a < b);
    });
    double left = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      left += r[order[k]];
      const double xk = d.x[order[k]][f], xn = d.x[order[k + 1]][f];
      if (xk == xn) continue;
      const double nl = static_cast<double>(k + 1), nr = static_cast<double>(n - k - 1);
      const double right = total - left;
      const double gain = left * left / nl + right * right / nr - base;
      if (gain > best.gain + 1e-12) {
        best.feature = static_cast<int>(f);
        best.threshold = 0.5 * (xk + xn);
        best.gain = gain;
      }
    }
  }
  return best;
}

struct TreeBuilder {
  const Dataset& d;
  const std::vector<double>& resid;
  const std::vector<double>& hess;
  std::size_t max_depth;
  RegressionTree tree;
  std::vector<int> leaf_of;  // per row

  int build(std::vector<std::size_t> rows, std::size_t depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const Split s = depth < max_depth ? best_split(d, resid, rows) : Split{};
    if (s.feature < 0) {
      double g = 0.0, h = 0.0;
      for (auto i : rows) {
        g += resid[i];
        h += hess[i];
        leaf_of[i] = id;
      }
      tree.nodes[static_cast<std::size_t>(id)].value = g / std::max(h, 1e-12);
      return id;
    }
    std::vector<std::size_t> lrows, rrows;
    for (auto i : rows) {
      (d.x[i][static_cast<std::size_t>(s.feature)] <= s.threshold ? lrows : rrows).push_back(i);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(std::move(lrows), depth + 1);
    const int r = build(std::move(rrows), depth + 1);
    auto& n = tree.nodes[static_cast<std::size_t>(id)];
    n.feature = s.feature;
    n.threshold = s.threshold;
    n.left = l;
    n.right = r;
    return id;
  }
};

}  // namespace

nlohmann::json RegressionTree::to_json() const {
  return nodes.empty() ? nlohmann::json{{"value", 0.0}} : node_json(*this, 0);
}

RegressionTree RegressionTree::from_json(const nlohmann::json& j) {
  RegressionTree t;
  node_from_json(t, j);
  return t;
}

double GbModel::decision(std::span<const double> x) const {
  double f = f0_;
  for (const auto& t : trees_) f += shrinkage_ * t.predict(x);
  return f;
}

double GbModel::predict_proba(std::span<const double> x) const {
  check_arity(x);
  return num::sigmoid(decision(x));
}

nlohmann::json GbModel::to_json() const {
  auto trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return {{"kind", kind()},       {"arity", arity_},    {"f0", f0_},
          {"shrinkage", shrinkage_}, {"trees", trees}, {"train_deviance", deviance_}};
}

GbModel GbModel::from_json(const nlohmann::json& j) {
  std::vector<RegressionTree> trees;
  for (const auto& t : j.at("trees")) trees.push_back(RegressionTree::from_json(t));
  GbModel m(j.at("arity").get<std::size_t>(), j.at("f0").get<double>(), j.at("shrinkage").get<double>(),
            std::move(trees));
  if (j.contains("train_deviance")) m.set_deviance_history(j.at("train_deviance").get<std::vector<double>>());
  return m;
}

GbModel gb_fit(const Dataset& data, const GbConfig& config) {
  config.validate();
  data.validate();
  data.require_both_classes("gb_fit");
  const std::size_t n = data.rows();
  const double base = static_cast<double>(data.positives()) / static_cast<double>(n);
  const double f0 = std::log(base / (1.0 - base));

  std::vector<double> f(n, f0), resid(n), hess(n), trial(n);
  std::vector<double> history{binomial_deviance(f, data.y)};
  std::vector<RegressionTree> trees;
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});

  for (std::size_t round = 0; round < config.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = num::sigmoid(f[i]);
      resid[i] = data.y[i] - p;
      hess[i] = p * (1.0 - p);
    }
    TreeBuilder b{data, resid, hess, config.depth, {}, std::vector<int>(n, 0)};
    b.build(all, 0);

    double scale = 1.0;
    double dev = history.back();
    for (int attempt = 0; attempt < 40; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = f[i] + config.shrinkage * scale *
                              b.tree.nodes[static_cast<std::size_t>(b.leaf_of[i])].value;
      }
      dev = binomial_deviance(trial, data.y);
      if (dev <= history.back()) break;
      scale *= 0.5;
    }
    if (dev > history.back()) {
      scale = 0.0;
      trial = f;
      dev = history.back();
    }
    if (scale != 1.0) {
      for (auto& node : b.tree.nodes) node.value *= scale;
    }
    f.swap(trial);
    history.push_back(dev);
    trees.push_back(std::move(b.tree));
  }

  GbModel m(data.cols(), f0, config.shrinkage, std::move(trees));
  m.set_deviance_history(std::move(history));
  return m;
}

}  // namespace bitext::cls
