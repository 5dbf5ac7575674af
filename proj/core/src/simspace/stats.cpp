#include "bitext/simspace/stats.hpp"

#include <algorithm>
#include <cmath>

namespace bitext::sim {

std::string to_string(Category c) {
  switch (c) {
    case Category::trad: return "trad";
    case Category::semrel: return "semrel";
    case Category::unrel: return "unrel";
    case Category::tagpair: return "tagpair";
  }
  return "trad";
}

Category category_from_string(const std::string& s) {
  if (s == "trad") return Category::trad;
  if (s == "semrel") return Category::semrel;
  if (s == "unrel") return Category::unrel;
  if (s == "tagpair") return Category::tagpair;
  throw ConfigError("unknown pair category '" + s + "'");
}

nlohmann::json SimStats::to_json() const {
  return {{"category", to_string(category)}, {"mean", mean}, {"std", std}, {"count", count}};
}

SimStats sim_stats(std::span<const double> sims, Category category) {
  if (sims.size() < 2) {
    throw EmptyInputError("sim_stats: need at least 2 pairs for category " + to_string(category));
  }
  const double n = static_cast<double>(sims.size());
  double sum = 0.0;
  for (double s : sims) sum += s;
  const double mean = sum / n;
  double ss = 0.0;
  for (double s : sims) ss += (s - mean) * (s - mean);
  return SimStats{mean, std::sqrt(ss / n), sims.size(), category};
}

SimStats sim_stats(std::span<const std::pair<SentenceEmbedding, SentenceEmbedding>> pairs,
                   Category category) {
  std::vector<double> sims;
  sims.reserve(pairs.size());
  for (const auto& [a, b] : pairs) sims.push_back(cosine(a, b));
  return sim_stats(std::span<const double>(sims), category);
}

Delta delta_tr_ur(const SimStats& trad, const SimStats& unrel) {
  if (trad.category != Category::trad || unrel.category != Category::unrel) {
    throw UsageError("delta_tr_ur: expected (trad, unrel), got (" + to_string(trad.category) + ", " +
                     to_string(unrel.category) + ")");
  }
  return Delta{trad.mean - unrel.mean, std::hypot(trad.std, unrel.std)};
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw UsageError("pearson: lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  if (x.size() < 2) throw UsageError("pearson: need at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelationError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace bitext::sim
