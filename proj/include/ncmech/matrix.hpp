#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ncmech/error.hpp"
#include "ncmech/polynomial.hpp"
#include "ncmech/scalar.hpp"

namespace ncmech {

/// Small dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ScalarMatrix = Matrix<Scalar>;
using PolynomialMatrix = Matrix<Polynomial>;

ScalarMatrix identity_matrix(std::size_t n, ScalarMode mode);
ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b);
ScalarMatrix operator+(const ScalarMatrix& a, const ScalarMatrix& b);
ScalarMatrix operator*(const Scalar& c, const ScalarMatrix& a);
std::vector<Scalar> operator*(const ScalarMatrix& a, const std::vector<Scalar>& v);

Scalar determinant(const ScalarMatrix& a);

/// Gauss-Jordan inverse; exact in exact mode, partial pivoting in float mode.
/// Throws SingularError when a pivot vanishes.
ScalarMatrix inverse(const ScalarMatrix& a);

/// Solves a x = b for small dense double systems (partial pivoting).
/// Returns false and leaves x untouched when |pivot| < tol.
bool solve_in_place(std::vector<double>& a, std::vector<double>& b, std::size_t n, double tol = 1e-300);

double determinant(std::vector<double> a, std::size_t n);

}  // namespace ncmech
