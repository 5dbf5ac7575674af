#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "bitext/error.hpp"

namespace bitext::num {

// Dense row-major matrix. Vectors are 1 x n matrices; the NMT code uses the
// row-vector convention (y = x W) throughout.
template <typename Real>
class BasicMatrix {
 public:
  using value_type = Real;

  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols, Real fill = Real(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  BasicMatrix(std::size_t rows, std::size_t cols, std::vector<Real> data);
  BasicMatrix(std::initializer_list<std::initializer_list<Real>> rows);

  static BasicMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Real& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Real operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Real> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Real> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<Real> values() noexcept { return data_; }
  std::span<const Real> values() const noexcept { return data_; }
  Real* data() noexcept { return data_.data(); }
  const Real* data() const noexcept { return data_.data(); }

  void fill(Real v);
  bool all_finite() const;
  std::string shape_string() const;

  friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

using Matrix = BasicMatrix<double>;
using MatrixF = BasicMatrix<float>;

enum class Activation { softmax_rows, tanh, sigmoid };

template <typename Real>
BasicMatrix<Real> matmul(const BasicMatrix<Real>& a, const BasicMatrix<Real>& b);

template <typename Real>
BasicMatrix<Real> activate(const BasicMatrix<Real>& x, Activation kind);

// Numerically safe scalar helpers shared with the NMT kernels.
template <typename Real>
Real sigmoid(Real x);

// In-place max-subtracted softmax over a contiguous span.
template <typename Real>
void softmax_inplace(std::span<Real> v);

extern template class BasicMatrix<float>;
extern template class BasicMatrix<double>;

}  // namespace bitext::num
