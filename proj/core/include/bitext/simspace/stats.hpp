#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitext/simspace/embedding.hpp"

namespace bitext::sim {

enum class Category { trad, semrel, unrel, tagpair };

std::string to_string(Category c);
Category category_from_string(const std::string& s);

struct SimStats {
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t count = 0;
  Category category = Category::trad;

  nlohmann::json to_json() const;
};

// Mean and population standard deviation of precomputed similarities.
// Throws EmptyInputError for fewer than two values.
SimStats sim_stats(std::span<const double> sims, Category category);

SimStats sim_stats(std::span<const std::pair<SentenceEmbedding, SentenceEmbedding>> pairs,
                   Category category);

struct Delta {
  double delta = 0.0;
  double sigma = 0.0;
};

// Requires categories trad and unrel (UsageError otherwise). The two standard
// deviations are combined in quadrature.
Delta delta_tr_ur(const SimStats& trad, const SimStats& unrel);

// Sample Pearson correlation. UsageError for length mismatch or fewer than two
// points, UndefinedCorrelationError when either side has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace bitext::sim
