#include "ncmech/matrix.hpp"

#include <cmath>
#include <utility>

namespace ncmech {

ScalarMatrix identity_matrix(std::size_t n, ScalarMode mode) {
  ScalarMatrix m(n, n, Scalar::zero(mode));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(mode);
  return m;
}

ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  const ScalarMode mode = a.data().empty() ? ScalarMode::exact : a(0, 0).mode();
  ScalarMatrix r(a.rows(), b.cols(), Scalar::zero(mode));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += a(i, k) * b(k, j);
    }
  }
  return r;
}

ScalarMatrix operator+(const ScalarMatrix& a, const ScalarMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix sum: shapes differ");
  ScalarMatrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
  }
  return r;
}

ScalarMatrix operator*(const Scalar& c, const ScalarMatrix& a) {
  ScalarMatrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) *= c;
  }
  return r;
}

std::vector<Scalar> operator*(const ScalarMatrix& a, const std::vector<Scalar>& v) {
  if (a.cols() != v.size()) throw DimensionError("matrix-vector product: dimensions differ");
  std::vector<Scalar> r;
  r.reserve(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Scalar s = Scalar::zero(v.empty() ? ScalarMode::exact : v[0].mode());
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    r.push_back(std::move(s));
  }
  return r;
}

namespace {

// Index of the pivot row for column `col`: first non-zero in exact mode,
// largest magnitude in float mode.
std::size_t pick_pivot(const ScalarMatrix& m, std::size_t col) {
  std::size_t best = col;
  double best_abs = -1.0;
  for (std::size_t r = col; r < m.rows(); ++r) {
    if (m(r, col).is_zero()) continue;
    if (m(r, col).is_exact()) return r;
    const double v = std::abs(m(r, col).to_double());
    if (v > best_abs) best_abs = v, best = r;
  }
  return best;
}

void swap_rows(ScalarMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

}  // namespace

Scalar determinant(const ScalarMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  const ScalarMode mode = n ? a(0, 0).mode() : ScalarMode::exact;
  ScalarMatrix m = a;
  Scalar det = Scalar::one(mode);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t p = pick_pivot(m, c);
    if (m(p, c).is_zero()) return Scalar::zero(mode);
    if (p != c) {
      swap_rows(m, p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c).is_zero()) continue;
      const Scalar factor = m(r, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(r, j) -= factor * m(c, j);
    }
  }
  return det;
}

ScalarMatrix inverse(const ScalarMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  const ScalarMode mode = n ? a(0, 0).mode() : ScalarMode::exact;
  ScalarMatrix m = a;
  ScalarMatrix inv = identity_matrix(n, mode);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t p = pick_pivot(m, c);
    if (m(p, c).is_zero() || (!m(p, c).is_exact() && std::abs(m(p, c).to_double()) < 1e-300)) {
      throw SingularError("matrix is singular (zero pivot in column " + std::to_string(c) + ")");
    }
    swap_rows(m, p, c);
    swap_rows(inv, p, c);
    const Scalar pivot = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= pivot;
      inv(c, j) /= pivot;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m(r, c).is_zero()) continue;
      const Scalar factor = m(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= factor * m(c, j);
        inv(r, j) -= factor * inv(c, j);
      }
    }
  }
  return inv;
}

bool solve_in_place(std::vector<double>& a, std::vector<double>& b, std::size_t n, double tol) {
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r * n + c]) > std::abs(a[p * n + c])) p = r;
    }
    if (std::abs(a[p * n + c]) < tol) return false;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[p * n + j], a[c * n + j]);
      std::swap(b[p], b[c]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * b[j];
    b[i] = s / a[i * n + i];
  }
  return true;
}

double determinant(std::vector<double> a, std::size_t n) {
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r * n + c]) > std::abs(a[p * n + c])) p = r;
    }
    if (a[p * n + c] == 0.0) return 0.0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[p * n + j], a[c * n + j]);
      det = -det;
    }
    det *= a[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
    }
  }
  return det;
}

}  // namespace ncmech
