#pragma once

#include <cstddef>

#include "convexlse/kernels.hpp"
#include "convexlse/types.hpp"

namespace convexlse {

// Dense column-major matrix; columns are contiguous so both A x and A^T x
// stream through memory once.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix from_row_major(std::size_t rows, std::size_t cols, ConstSpan values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double* col(std::size_t j) { return data_.data() + j * rows_; }
  const double* col(std::size_t j) const { return data_.data() + j * rows_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  ConstSpan col_span(std::size_t j) const { return {col(j), rows_}; }
  Vec to_row_major() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vec data_;
};

void matvec(const Matrix& a, ConstSpan x, MutSpan y);    // y = A x
void matvec_t(const Matrix& a, ConstSpan x, MutSpan y);  // y = A^T x

Matrix gram(const Matrix& x);  // X^T X

// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double lambda_max(const Matrix& g, int iterations = 50);

// Modified Gram-Schmidt, two passes; columns must be linearly independent.
void orthonormalize_columns(Matrix& a);

// max_ij |B^T B - I|
double orthonormality_defect(const Matrix& b);

}  // namespace convexlse
