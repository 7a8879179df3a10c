#include "convexlse/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "convexlse/errors.hpp"

namespace convexlse {

Matrix Matrix::from_row_major(std::size_t rows, std::size_t cols, ConstSpan values) {
  if (values.size() != rows * cols)
    throw DimensionMismatch("matrix literal has wrong number of entries");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = values[i * cols + j];
  return m;
}

Vec Matrix::to_row_major() const {
  Vec out(rows_ * cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i * cols_ + j] = (*this)(i, j);
  return out;
}

void matvec(const Matrix& a, ConstSpan x, MutSpan y) {
  kernels::ops().gemv_col(a.col(0), a.rows(), a.cols(), x.data(), y.data());
}

void matvec_t(const Matrix& a, ConstSpan x, MutSpan y) {
  kernels::ops().gemv_col_t(a.col(0), a.rows(), a.cols(), x.data(), y.data());
}

Matrix gram(const Matrix& x) {
  const std::size_t p = x.cols();
  Matrix g(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j; k < p; ++k) {
      const double v = kernels::ops().dot(x.col(j), x.col(k), x.rows());
      g(j, k) = v;
      g(k, j) = v;
    }
  }
  return g;
}

double lambda_max(const Matrix& g, int iterations) {
  const std::size_t p = g.rows();
  if (p == 0) return 0.0;
  Vec v(p), w(p);
  for (std::size_t i = 0; i < p; ++i) v[i] = 1.0 + static_cast<double>(i) / (p + 1.0);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    matvec(g, v, w);
    const double nrm = norm(w);
    if (nrm == 0.0) return 0.0;
    for (std::size_t i = 0; i < p; ++i) v[i] = w[i] / nrm;
    lambda = nrm;
  }
  // Rayleigh quotient of the final iterate.
  matvec(g, v, w);
  lambda = dot(v, w) / norm_sq(v);
  return lambda;
}

void orthonormalize_columns(Matrix& a) {
  const std::size_t p = a.cols();
  const std::size_t n = a.rows();
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < p; ++j) {
      double* cj = a.col(j);
      for (std::size_t k = 0; k < j; ++k) {
        const double proj = kernels::ops().dot(a.col(k), cj, n);
        kernels::ops().axpy(-proj, a.col(k), cj, n);
      }
      const double nrm = std::sqrt(kernels::ops().sum_sq(cj, n));
      if (nrm < 1e-300) throw ParameterOutOfRange("columns are linearly dependent");
      for (std::size_t i = 0; i < n; ++i) cj[i] /= nrm;
    }
  }
}

double orthonormality_defect(const Matrix& b) {
  const std::size_t p = b.cols();
  double worst = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j; k < p; ++k) {
      const double v = kernels::ops().dot(b.col(j), b.col(k), b.rows());
      worst = std::max(worst, std::fabs(v - (j == k ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace convexlse
