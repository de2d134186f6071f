#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ncmech/error.hpp"
#include "ncmech/scalar.hpp"

namespace ncmech {

/// Sparse multivariate polynomial with Scalar coefficients.
///
/// Variables are indexed 0..nvars-1. Terms are kept in a map ordered
/// lexicographically on exponent tuples and zero coefficients are never
/// stored, so structural equality is mathematical equality. Every
/// coefficient shares the polynomial's mode.
class Polynomial {
 public:
  using Exponents = std::vector<std::uint8_t>;
  using TermMap = std::map<Exponents, Scalar>;

  /// Per-variable exponent cap; exceeding it throws DegreeOverflow.
  static constexpr unsigned max_degree = 32;

  explicit Polynomial(std::size_t nvars, ScalarMode mode = ScalarMode::exact);

  static Polynomial constant(std::size_t nvars, const Scalar& c);
  static Polynomial variable(std::size_t nvars, std::size_t index, ScalarMode mode = ScalarMode::exact);
  static Polynomial monomial(std::size_t nvars, const Scalar& c, const Exponents& exps);

  std::size_t nvars() const { return nvars_; }
  ScalarMode mode() const { return mode_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  unsigned total_degree() const;
  unsigned degree_in(std::size_t var) const;

  Scalar coefficient(const Exponents& exps) const;
  Scalar constant_term() const { return coefficient(Exponents(nvars_, 0)); }

  /// Adds c * x^exps in place (canonical form is maintained).
  void add_term(const Exponents& exps, const Scalar& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Scalar& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Scalar& c) { return a *= c; }
  friend Polynomial operator*(const Scalar& c, Polynomial a) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  Polynomial pow(unsigned k) const;

  /// Formal partial derivative with respect to variable `var`.
  Polynomial diff(std::size_t var) const;

  /// Antiderivative in `var` with zero integration constant.
  Polynomial integrate(std::size_t var) const;

  Scalar eval(std::span<const Scalar> point) const;

  /// Evaluation at a double point; the polynomial must be in float mode.
  double eval(std::span<const double> point) const;

  Polynomial converted(ScalarMode mode) const;

  /// Re-expresses the polynomial over `new_nvars` variables, mapping variable
  /// i to variable offset+i.
  Polynomial embedded(std::size_t new_nvars, std::size_t offset = 0) const;

  /// Largest |coefficient| as a double (0 for the zero polynomial).
  double max_abs_coefficient() const;

  /// Drops float-mode terms with |c| <= tol. Exact polynomials are returned unchanged.
  Polynomial chopped(double tol) const;

  /// Human-readable form, e.g. "1/2*x0^2*x1 - 3". `names` defaults to x0, x1, ...
  std::string to_string(std::span<const std::string> names = {}) const;

 private:
  void check_compatible(const Polynomial& o, const char* op) const;

  std::size_t nvars_;
  ScalarMode mode_;
  TermMap terms_;
};

/// Evaluates `p` at ring-valued arguments: p(args[0], ..., args[n-1]).
///
/// `Ring` needs +=, * (Ring x Ring), * (Ring x Scalar). `one` is the unit of
/// the target ring.
template <class Ring>
Ring substitute(const Polynomial& p, std::span<const Ring> args, const Ring& one) {
  if (args.size() != p.nvars()) {
    throw DimensionError("substitute: expected " + std::to_string(p.nvars()) + " arguments, got " +
                         std::to_string(args.size()));
  }
  std::vector<std::vector<Ring>> powers(args.size());
  auto power = [&](std::size_t var, unsigned k) -> const Ring& {
    auto& cache = powers[var];
    if (cache.empty()) cache.push_back(one);
    while (cache.size() <= k) cache.push_back(cache.back() * args[var]);
    return cache[k];
  };
  Ring result = one * Scalar::zero(p.mode());
  for (const auto& [exps, c] : p.terms()) {
    Ring term = one * c;
    for (std::size_t v = 0; v < exps.size(); ++v) {
      if (exps[v] != 0) term = term * power(v, exps[v]);
    }
    result += term;
  }
  return result;
}

Polynomial substitute(const Polynomial& p, std::span<const Polynomial> args);

/// Gradient vector (∂_0 p, ..., ∂_{n-1} p).
std::vector<Polynomial> gradient(const Polynomial& p);

/// Dense float evaluator for a fixed polynomial; used on integration hot paths.
class FloatEvaluator {
 public:
  FloatEvaluator() = default;
  explicit FloatEvaluator(const Polynomial& p);

  std::size_t nvars() const { return nvars_; }
  double operator()(std::span<const double> point) const;

 private:
  std::size_t nvars_ = 0;
  std::vector<double> coeffs_;
  std::vector<std::uint8_t> exps_;  // row-major, nvars_ per term
};

}  // namespace ncmech
