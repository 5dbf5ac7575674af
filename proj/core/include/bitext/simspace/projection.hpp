#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bitext/numkit/matrix.hpp"

namespace bitext::sim {

enum class ProjectionMethod { pca, tsne };

ProjectionMethod projection_from_string(const std::string& s);

struct TsneOptions {
  double perplexity = 0.0;  // 0 selects min(30, (n-1)/3)
  std::size_t iterations = 1000;
  std::size_t exaggeration_iters = 100;
  double exaggeration = 4.0;
  double learning_rate = 200.0;
  std::uint64_t seed = 1;
};

struct Projection {
  num::Matrix points;             // n x 2
  std::vector<double> kl_history; // t-SNE only: KL(P||Q) after every iteration
};

// Rows of `data` are the points. PCA flips each axis so that its largest
// magnitude loading is positive.
Projection pca_2d(const num::Matrix& data);

// Exact O(n^2) t-SNE. ParameterError when perplexity exceeds (n-1)/3.
Projection tsne_2d(const num::Matrix& data, const TsneOptions& options = {});

// Dispatches on method; needs at least three rows (EmptyInputError).
Projection project_2d(const num::Matrix& data, ProjectionMethod method, const TsneOptions& options = {});

}  // namespace bitext::sim
