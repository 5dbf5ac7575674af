#include "bitext/numkit/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "bitext/numkit/kernels.hpp"

namespace bitext::num {

template <typename Real>
BasicMatrix<Real>::BasicMatrix(std::size_t rows, std::size_t cols, std::vector<Real> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_string());
  }
}

template <typename Real>
BasicMatrix<Real>::BasicMatrix(std::initializer_list<std::initializer_list<Real>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

template <typename Real>
BasicMatrix<Real> BasicMatrix<Real>::identity(std::size_t n) {
  BasicMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Real(1);
  return m;
}

template <typename Real>
void BasicMatrix<Real>::fill(Real v) {
  std::fill(data_.begin(), data_.end(), v);
}

template <typename Real>
bool BasicMatrix<Real>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](Real v) { return std::isfinite(v); });
}

template <typename Real>
std::string BasicMatrix<Real>::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

template <typename Real>
BasicMatrix<Real> matmul(const BasicMatrix<Real>& a, const BasicMatrix<Real>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul shape mismatch: " + a.shape_string() + " x " + b.shape_string());
  }
  BasicMatrix<Real> out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) kernels::vec_mat(a.row(r), b, out.row(r));
  return out;
}

template <typename Real>
Real sigmoid(Real x) {
  if (x >= Real(0)) return Real(1) / (Real(1) + std::exp(-x));
  const Real e = std::exp(x);
  return e / (Real(1) + e);
}

template <typename Real>
void softmax_inplace(std::span<Real> v) {
  const Real mx = *std::max_element(v.begin(), v.end());
  Real sum = 0;
  for (auto& x : v) {
    x = std::exp(x - mx);
    sum += x;
  }
  const Real inv = Real(1) / sum;
  for (auto& x : v) x *= inv;
}

template <typename Real>
BasicMatrix<Real> activate(const BasicMatrix<Real>& x, Activation kind) {
  if (x.empty()) throw DimensionError("activate: empty matrix " + x.shape_string());
  BasicMatrix<Real> out = x;
  switch (kind) {
    case Activation::tanh:
      for (auto& v : out.values()) v = std::tanh(v);
      break;
    case Activation::sigmoid:
      for (auto& v : out.values()) v = sigmoid(v);
      break;
    case Activation::softmax_rows:
      for (std::size_t r = 0; r < out.rows(); ++r) softmax_inplace(out.row(r));
      break;
  }
  return out;
}

template class BasicMatrix<float>;
template class BasicMatrix<double>;
template BasicMatrix<float> matmul(const BasicMatrix<float>&, const BasicMatrix<float>&);
template BasicMatrix<double> matmul(const BasicMatrix<double>&, const BasicMatrix<double>&);
template BasicMatrix<float> activate(const BasicMatrix<float>&, Activation);
template BasicMatrix<double> activate(const BasicMatrix<double>&, Activation);
template float sigmoid(float);
template double sigmoid(double);
template void softmax_inplace(std::span<float>);
template void softmax_inplace(std::span<double>);

}  // namespace bitext::num
