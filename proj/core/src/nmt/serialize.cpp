#include "bitext/nmt/serialize.hpp"

#include <type_traits>

namespace bitext::nmt {

namespace {

template <typename Real>
constexpr num::Precision precision_of() {
  return std::is_same_v<Real, float> ? num::Precision::f32 : num::Precision::f64;
}

// A freshly constructed model provides the parameter registry (names and
// order) to fill from the container.
template <typename Real>
NmtModel<Real> registry_model(const ModelDims& dims, text::Vocabulary vocab, text::BpeModel bpe,
                              std::uint64_t seed) {
  return NmtModel<Real>(dims, std::move(vocab), std::move(bpe), seed);
}

}  // namespace

template <typename Real>
num::Container to_container(const NmtModel<Real>& model) {
  num::Container c;
  c.precision = precision_of<Real>();
  c.seed = model.seed();
  c.meta["kind"] = "nmt";
  c.meta["dims"] = {{"embed", model.dims().embed},
                    {"hidden", model.dims().hidden},
                    {"vocab", model.dims().vocab}};
  c.meta["vocabulary"] = model.vocab().tokens();
  auto merges = nlohmann::json::array();
  for (const auto& [a, b] : model.bpe().merges()) merges.push_back({a, b});
  c.meta["bpe"] = merges;
  for (const auto* p : model.params()) {
    c.add(p->name, p->value);
    c.add(p->name + "#eg2", p->mean_sq_grad);
    c.add(p->name + "#ex2", p->mean_sq_update);
  }
  return c;
}

template <typename Real>
NmtModel<Real> from_container(const num::Container& c) {
  if (c.precision != precision_of<Real>()) {
    throw ConfigError("checkpoint precision " + num::to_string(c.precision) +
                      " does not match the requested precision " +
                      num::to_string(precision_of<Real>()));
  }
  if (c.meta.value("kind", "") != "nmt") throw ParseError("container does not hold an NMT model");
  ModelDims dims;
  dims.embed = c.meta.at("dims").at("embed").get<std::size_t>();
  dims.hidden = c.meta.at("dims").at("hidden").get<std::size_t>();
  dims.vocab = c.meta.at("dims").at("vocab").get<std::size_t>();
  auto vocab = text::Vocabulary::from_tokens(c.meta.at("vocabulary").get<std::vector<std::string>>());
  std::vector<text::BpeModel::Merge> merges;
  for (const auto& m : c.meta.at("bpe")) merges.emplace_back(m.at(0).get<std::string>(), m.at(1).get<std::string>());

  NmtModel<Real> model = registry_model<Real>(dims, std::move(vocab), text::BpeModel(std::move(merges)), c.seed);
  for (auto* p : model.params()) {
    auto value = c.get<Real>(p->name);
    if (value.rows() != p->value.rows() || value.cols() != p->value.cols()) {
      throw DimensionError("checkpoint tensor '" + p->name + "' has shape " + value.shape_string() +
                           ", expected " + p->value.shape_string());
    }
    p->value = std::move(value);
    p->mean_sq_grad = c.get<Real>(p->name + "#eg2");
    p->mean_sq_update = c.get<Real>(p->name + "#ex2");
    p->grad = num::BasicMatrix<Real>(p->value.rows(), p->value.cols());
  }
  return model;
}

template <typename Real>
void save_model(const std::filesystem::path& path, const NmtModel<Real>& model) {
  num::write_container(path, to_container(model));
}

template <typename Real>
NmtModel<Real> load_model(const std::filesystem::path& path) {
  return from_container<Real>(num::read_container(path));
}

std::string checkpoint_name(std::size_t step) { return "ckpt-" + std::to_string(step) + ".btf"; }

template num::Container to_container(const NmtModel<float>&);
template num::Container to_container(const NmtModel<double>&);
template NmtModel<float> from_container(const num::Container&);
template NmtModel<double> from_container(const num::Container&);
template void save_model(const std::filesystem::path&, const NmtModel<float>&);
template void save_model(const std::filesystem::path&, const NmtModel<double>&);
template NmtModel<float> load_model(const std::filesystem::path&);
template NmtModel<double> load_model(const std::filesystem::path&);

}  // namespace bitext::nmt
