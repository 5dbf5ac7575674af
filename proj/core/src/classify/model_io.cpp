#include "bitext/classify/model_io.hpp"

#include <fstream>

#include "bitext/classify/ensemble.hpp"
#include "bitext/classify/gradient_boosting.hpp"
#include "bitext/classify/svm.hpp"
#include "bitext/classify/threshold.hpp"
#include "bitext/error.hpp"

namespace bitext::cls {

namespace {

namespace fs = std::filesystem;

nlohmann::json entry(const Classifier& m, const fs::path& path, std::size_t& svm_count) {
  if (const auto* svm = dynamic_cast<const SvmModel*>(&m)) {
    const std::string file = path.stem().string() + ".svm" + std::to_string(svm_count++) + ".btf";
    num::write_container(path.parent_path() / file, svm->to_container());
    auto j = svm->to_json();
    j["file"] = file;
    return j;
  }
  if (const auto* ens = dynamic_cast<const EnsembleModel*>(&m)) {
    auto members = nlohmann::json::array();
    for (const auto& member : ens->members()) members.push_back(entry(*member, path, svm_count));
    return {{"kind", "ens"}, {"members", members}};
  }
  return m.to_json();
}

std::unique_ptr<Classifier> restore(const nlohmann::json& j, const fs::path& dir) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "thrs") return std::make_unique<ThresholdModel>(ThresholdModel::from_json(j));
  if (kind == "gb") return std::make_unique<GbModel>(GbModel::from_json(j));
  if (kind == "svm") {
    return std::make_unique<SvmModel>(
        SvmModel::from_container(num::read_container(dir / j.at("file").get<std::string>())));
  }
  if (kind == "ens") {
    std::vector<std::shared_ptr<const Classifier>> members;
    for (const auto& m : j.at("members")) members.push_back(restore(m, dir));
    return std::make_unique<EnsembleModel>(std::move(members));
  }
  throw ParseError("unknown classifier kind '" + kind + "'");
}

}  // namespace

void save_classifier(const Classifier& model, const fs::path& path) {
  std::size_t svm_count = 0;
  const auto j = entry(model, path, svm_count);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write classifier to " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

std::unique_ptr<Classifier> load_classifier(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read classifier from " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("classifier file " + path.string() + ": " + e.what());
  }
  try {
    return restore(j, path.parent_path());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("classifier file " + path.string() + ": " + e.what());
  }
}

}  // namespace bitext::cls
