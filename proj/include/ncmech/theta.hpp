#pragma once

#include <cstddef>
#include <vector>

#include "ncmech/scalar.hpp"

namespace ncmech {

/// Constant antisymmetric noncommutativity matrix θ^{ij}.
class ThetaMatrix {
 public:
  /// `row_major` holds n*n entries; throws InvalidArgument unless θ^{ij} = -θ^{ji}.
  ThetaMatrix(std::size_t n, std::vector<Scalar> row_major);

  static ThetaMatrix zero(std::size_t n, ScalarMode mode = ScalarMode::exact);

  /// n = 2 with θ^{12} = theta12.
  static ThetaMatrix planar(const Scalar& theta12);

  std::size_t n() const { return n_; }
  ScalarMode mode() const { return mode_; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  bool is_zero() const;

  ThetaMatrix negated() const;
  ThetaMatrix scaled(const Scalar& lambda) const;
  ThetaMatrix converted(ScalarMode mode) const;

  friend bool operator==(const ThetaMatrix& a, const ThetaMatrix& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t n_;
  ScalarMode mode_;
  std::vector<Scalar> entries_;
};

}  // namespace ncmech
