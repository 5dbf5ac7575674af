#include "bitext/numkit/container.hpp"

#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace bitext::num {

namespace {

static_assert(std::endian::native == std::endian::little,
              "container encoding assumes a little-endian host");

template <typename T>
void append_raw(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T read_raw(const std::string& in, std::size_t pos) {
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  return v;
}

}  // namespace

std::string to_string(Precision p) { return p == Precision::f32 ? "f32" : "f64"; }

Precision precision_from_string(const std::string& s) {
  if (s == "f32") return Precision::f32;
  if (s == "f64") return Precision::f64;
  throw ConfigError("unknown precision '" + s + "' (expected f32 or f64)");
}

Precision precision_from_env(Precision fallback) {
  const char* v = std::getenv("BTF_PRECISION");
  if (v == nullptr || *v == '\0') return fallback;
  return precision_from_string(v);
}

const NamedTensor& Container::find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return t;
  }
  throw ParseError("container has no tensor named '" + name + "'");
}

template <typename Real>
void Container::add(const std::string& name, const BasicMatrix<Real>& m) {
  NamedTensor t{name, m.rows(), m.cols(), {}};
  t.values.assign(m.values().begin(), m.values().end());
  tensors.push_back(std::move(t));
}

template <typename Real>
BasicMatrix<Real> Container::get(const std::string& name) const {
  const auto& t = find(name);
  std::vector<Real> data(t.values.begin(), t.values.end());
  return BasicMatrix<Real>(t.rows, t.cols, std::move(data));
}

template void Container::add(const std::string&, const BasicMatrix<float>&);
template void Container::add(const std::string&, const BasicMatrix<double>&);
template BasicMatrix<float> Container::get(const std::string&) const;
template BasicMatrix<double> Container::get(const std::string&) const;

std::string encode_container(const Container& c) {
  const std::size_t width = c.precision == Precision::f32 ? 4 : 8;
  nlohmann::json header;
  header["format"] = "BTF1";
  header["version"] = 1;
  header["precision"] = to_string(c.precision);
  header["seed"] = c.seed;
  header["meta"] = c.meta;
  auto registry = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& t : c.tensors) {
    if (t.values.size() != t.rows * t.cols) {
      throw DimensionError("tensor '" + t.name + "' length does not match its shape");
    }
    registry.push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}, {"offset", offset}});
    offset += t.values.size() * width;
  }
  header["tensors"] = registry;
  const std::string header_text = header.dump();

  std::string out(kContainerMagic, 4);
  append_raw<std::uint64_t>(out, header_text.size());
  out += header_text;
  out.reserve(out.size() + offset);
  for (const auto& t : c.tensors) {
    for (double v : t.values) {
      if (c.precision == Precision::f32) {
        append_raw<float>(out, static_cast<float>(v));
      } else {
        append_raw<double>(out, v);
      }
    }
  }
  return out;
}

Container decode_container(const std::string& bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kContainerMagic, 4) != 0) {
    throw ParseError("not a BTF1 container (bad magic)");
  }
  const auto header_len = read_raw<std::uint64_t>(bytes, 4);
  if (12 + header_len > bytes.size()) throw ParseError("BTF1 header truncated");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(12, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("BTF1 header is not valid JSON: ") + e.what());
  }

  Container c;
  c.precision = precision_from_string(header.at("precision").get<std::string>());
  c.seed = header.at("seed").get<std::uint64_t>();
  c.meta = header.value("meta", nlohmann::json::object());
  const std::size_t width = c.precision == Precision::f32 ? 4 : 8;
  const std::size_t payload = 12 + header_len;
  for (const auto& entry : header.at("tensors")) {
    NamedTensor t;
    t.name = entry.at("name").get<std::string>();
    t.rows = entry.at("rows").get<std::size_t>();
    t.cols = entry.at("cols").get<std::size_t>();
    const auto offset = entry.at("offset").get<std::size_t>();
    const std::size_t n = t.rows * t.cols;
    if (payload + offset + n * width > bytes.size()) {
      throw ParseError("BTF1 payload truncated in tensor '" + t.name + "'");
    }
    t.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t pos = payload + offset + i * width;
      t.values[i] = width == 4 ? static_cast<double>(read_raw<float>(bytes, pos))
                               : read_raw<double>(bytes, pos);
    }
    c.tensors.push_back(std::move(t));
  }
  return c;
}

void write_container(const std::filesystem::path& path, const Container& c) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string bytes = encode_container(c);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Container read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_container(ss.str());
}

}  // namespace bitext::num
