#pragma once

#include <cstddef>
#include <span>

#include "bitext/numkit/matrix.hpp"

// Small dense kernels used on the NMT hot path. All accumulate into their
// output argument and assume the caller has checked shapes.
namespace bitext::num::kernels {

template <typename Real>
inline void axpy(std::size_t n, Real a, const Real* x, Real* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

template <typename Real>
inline Real dot(std::size_t n, const Real* x, const Real* y) {
  Real s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

// out += x . M   (x has M.rows() entries, out has M.cols())
template <typename Real>
inline void vec_mat(std::span<const Real> x, const BasicMatrix<Real>& m, std::span<Real> out) {
  const std::size_t cols = m.cols();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const Real xr = x[r];
    if (xr != Real(0)) axpy(cols, xr, m.data() + r * cols, out.data());
  }
}

// out += M . v^T  (v has M.cols() entries, out has M.rows())
template <typename Real>
inline void mat_vec(const BasicMatrix<Real>& m, std::span<const Real> v, std::span<Real> out) {
  const std::size_t cols = m.cols();
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] += dot(cols, m.data() + r * cols, v.data());
}

// g += x^T . v  (outer product; g is x.size() x v.size())
template <typename Real>
inline void outer(std::span<const Real> x, std::span<const Real> v, BasicMatrix<Real>& g) {
  const std::size_t cols = g.cols();
  for (std::size_t r = 0; r < g.rows(); ++r) {
    const Real xr = x[r];
    if (xr != Real(0)) axpy(cols, xr, v.data(), g.data() + r * cols);
  }
}

}  // namespace bitext::num::kernels
