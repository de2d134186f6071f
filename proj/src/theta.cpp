#include "ncmech/theta.hpp"

#include <string>

#include "ncmech/error.hpp"

namespace ncmech {

ThetaMatrix::ThetaMatrix(std::size_t n, std::vector<Scalar> row_major)
    : n_(n), mode_(ScalarMode::exact), entries_(std::move(row_major)) {
  if (n_ == 0) throw InvalidArgument("ThetaMatrix: dimension must be positive");
  if (entries_.size() != n_ * n_) {
    throw DimensionError("ThetaMatrix: expected " + std::to_string(n_ * n_) + " entries, got " +
                         std::to_string(entries_.size()));
  }
  mode_ = entries_.front().mode();
  for (const auto& s : entries_) require_same_mode(mode_, s.mode(), "ThetaMatrix");
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      if (!((*this)(i, j) + (*this)(j, i)).is_zero()) {
        throw InvalidArgument("ThetaMatrix is not antisymmetric: theta[" + std::to_string(i) + "][" +
                              std::to_string(j) + "] = " + (*this)(i, j).to_string() + ", theta[" +
                              std::to_string(j) + "][" + std::to_string(i) + "] = " + (*this)(j, i).to_string());
      }
    }
  }
}

ThetaMatrix ThetaMatrix::zero(std::size_t n, ScalarMode mode) {
  return ThetaMatrix(n, std::vector<Scalar>(n * n, Scalar::zero(mode)));
}

ThetaMatrix ThetaMatrix::planar(const Scalar& theta12) {
  const Scalar z = Scalar::zero(theta12.mode());
  return ThetaMatrix(2, {z, theta12, -theta12, z});
}

bool ThetaMatrix::is_zero() const {
  for (const auto& s : entries_) {
    if (!s.is_zero()) return false;
  }
  return true;
}

ThetaMatrix ThetaMatrix::negated() const { return scaled(-Scalar::one(mode_)); }

ThetaMatrix ThetaMatrix::scaled(const Scalar& lambda) const {
  std::vector<Scalar> e = entries_;
  for (auto& s : e) s *= lambda;
  return ThetaMatrix(n_, std::move(e));
}

ThetaMatrix ThetaMatrix::converted(ScalarMode mode) const {
  std::vector<Scalar> e;
  e.reserve(entries_.size());
  for (const auto& s : entries_) e.push_back(s.converted(mode));
  return ThetaMatrix(n_, std::move(e));
}

}  // namespace ncmech
