#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "bfp/error.hpp"

namespace bfp {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  /// Builds from row-major storage; throws DimensionMismatch on size mismatch.
  static Matrix from_row_major(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
std::vector<double> matvec(const Matrix& a, std::span<const double> x);
double max_abs(std::span<const double> v) noexcept;

/// Thrown when a Cholesky pivot falls to 1e-12 x the largest diagonal entry
/// or below. `pivot` is the zero-based column where factorization stopped.
class NotPositiveDefiniteError : public Error {
 public:
  NotPositiveDefiniteError(std::size_t pivot, const std::string& message)
      : Error(ErrorCode::NotPositiveDefinite, message), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// Lower-triangular factor L with A = L L^T.
class Cholesky {
 public:
  explicit Cholesky(const Matrix& a);

  std::vector<double> solve(std::span<const double> b) const;
  /// Column-by-column inverse, symmetrized as (M + M^T) / 2.
  Matrix inverse() const;
  const Matrix& lower() const noexcept { return l_; }

 private:
  Matrix l_;
};

std::vector<double> cholesky_solve(const Matrix& a, std::span<const double> b);
Matrix spd_inverse(const Matrix& a);

}  // namespace bfp
