#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ncmech/polynomial.hpp"
#include "ncmech/theta.hpp"

namespace ncmech {

/// Truncated series Σ_{k=0}^{K} λ^k P_k in a formal bookkeeping parameter λ
/// that counts powers of θ (θ → λθ).
///
/// Products drop every grade above max_order, so identities "through order
/// M" are checked exactly by inspecting parts 0..M.
class GradedPolynomial {
 public:
  GradedPolynomial(std::size_t nvars, ScalarMode mode, unsigned max_order);

  /// `p` placed at grade `order`.
  static GradedPolynomial homogeneous(const Polynomial& p, unsigned order, unsigned max_order);

  std::size_t nvars() const { return nvars_; }
  ScalarMode mode() const { return mode_; }
  unsigned max_order() const { return static_cast<unsigned>(parts_.size() - 1); }

  const Polynomial& part(unsigned k) const;
  void add_to_part(unsigned k, const Polynomial& p);

  /// Sum of all parts (λ = 1).
  Polynomial total() const;

  /// True when every part of grade <= order is the zero polynomial.
  bool vanishes_through(unsigned order) const;

  /// Grade of the lowest non-zero part, if any.
  std::optional<unsigned> lowest_order() const;

  GradedPolynomial truncated(unsigned max_order) const;
  GradedPolynomial diff(std::size_t var) const;

  GradedPolynomial operator-() const;
  GradedPolynomial& operator+=(const GradedPolynomial& o);
  GradedPolynomial& operator-=(const GradedPolynomial& o);
  friend GradedPolynomial operator+(GradedPolynomial a, const GradedPolynomial& b) { return a += b; }
  friend GradedPolynomial operator-(GradedPolynomial a, const GradedPolynomial& b) { return a -= b; }
  friend GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b);
  friend GradedPolynomial operator*(GradedPolynomial a, const Scalar& c);
  friend GradedPolynomial operator*(const Scalar& c, GradedPolynomial a) { return std::move(a) * c; }

 private:
  std::size_t nvars_;
  ScalarMode mode_;
  std::vector<Polynomial> parts_;
};

/// Configuration bracket of graded functions; raises the grade by one.
GradedPolynomial poisson_bracket_config(const GradedPolynomial& F, const GradedPolynomial& G, const ThetaMatrix& theta);

/// p(args) with graded arguments; `p` itself sits at grade 0.
GradedPolynomial substitute(const Polynomial& p, std::span<const GradedPolynomial> args);

/// Σ_k λ^k P_k(args).
GradedPolynomial substitute(const GradedPolynomial& p, std::span<const GradedPolynomial> args);

/// Coordinate functions x^i + shift^i as graded polynomials (shift may be empty).
std::vector<GradedPolynomial> shifted_coordinates(std::size_t nvars, ScalarMode mode, unsigned max_order,
                                                  std::span<const GradedPolynomial> shift = {});

}  // namespace ncmech
