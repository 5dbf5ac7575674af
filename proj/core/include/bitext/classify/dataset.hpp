#pragma once

#include <span>
#include <string>
#include <vector>

namespace bitext::cls {

// Labelled feature rows. Labels are 0/1; every row has the same arity.
struct Dataset {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  std::vector<std::string> ids;
  std::vector<std::string> feature_names;

  std::size_t rows() const noexcept { return y.size(); }
  std::size_t cols() const noexcept { return x.empty() ? feature_names.size() : x.front().size(); }
  std::size_t positives() const;
  std::size_t negatives() const { return rows() - positives(); }

  void add(std::string id, std::vector<double> features, int label);
  Dataset subset(std::span<const std::size_t> rows) const;
  std::vector<double> column(std::size_t c) const;

  // Throws ValidationError subclasses: ragged rows (DimensionError), labels
  // outside {0,1} or non-finite features (ParameterError), duplicate ids
  // (IntegrityError).
  void validate() const;
  // FittingError unless both classes are present.
  void require_both_classes(const std::string& who) const;
};

}  // namespace bitext::cls
