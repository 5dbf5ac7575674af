#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitext/numkit/matrix.hpp"

namespace bitext::num {

enum class Precision { f32, f64 };

std::string to_string(Precision p);
Precision precision_from_string(const std::string& s);
// Reads BTF_PRECISION (f32|f64); unset means `fallback`.
Precision precision_from_env(Precision fallback = Precision::f64);

struct NamedTensor {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // widened; f32 containers round-trip exactly
};

// Flat binary parameter container:
//   "BTF1" | u64 LE header length | JSON header | little-endian raw values
// The header records the shape registry, precision, seed and free-form meta.
struct Container {
  Precision precision = Precision::f64;
  std::uint64_t seed = 0;
  nlohmann::json meta = nlohmann::json::object();
  std::vector<NamedTensor> tensors;

  const NamedTensor& find(const std::string& name) const;

  template <typename Real>
  void add(const std::string& name, const BasicMatrix<Real>& m);

  template <typename Real>
  BasicMatrix<Real> get(const std::string& name) const;
};

std::string encode_container(const Container& c);
Container decode_container(const std::string& bytes);

void write_container(const std::filesystem::path& path, const Container& c);
Container read_container(const std::filesystem::path& path);

inline constexpr char kContainerMagic[4] = {'B', 'T', 'F', '1'};

}  // namespace bitext::num
