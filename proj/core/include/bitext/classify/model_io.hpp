#pragma once

#include <filesystem>
#include <memory>

#include "bitext/classify/classifier.hpp"

namespace bitext::cls {

// JSON entry file at `path`. Threshold and GB models (also as ensemble
// members) are stored inline; each SVM writes its support vectors to a
// sibling "<stem>.svm<k>.btf" container referenced by name.
void save_classifier(const Classifier& model, const std::filesystem::path& path);
std::unique_ptr<Classifier> load_classifier(const std::filesystem::path& path);

}  // namespace bitext::cls
