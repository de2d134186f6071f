#pragma once

#include <random>
#include <vector>

#include "ncmech/polynomial.hpp"
#include "ncmech/theta.hpp"

namespace ncmech::testing {

inline Scalar q(long num, long den = 1) { return Scalar::exact(num, den); }

inline Polynomial var(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }

/// Random exact polynomial with small rational coefficients and total degree <= max_degree.
inline Polynomial random_poly(std::mt19937& rng, std::size_t n, unsigned max_degree, unsigned terms = 5) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  Polynomial p(n);
  for (unsigned t = 0; t < terms; ++t) {
    Polynomial::Exponents e(n, 0);
    unsigned budget = deg(rng);
    for (unsigned k = 0; k < budget; ++k) e[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]++;
    p.add_term(e, q(num(rng), den(rng)));
  }
  return p;
}

inline ThetaMatrix random_theta(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> num(-4, 4);
  std::vector<Scalar> m(n * n, q(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m[i * n + j] = q(num(rng), 3);
      m[j * n + i] = -m[i * n + j];
    }
  }
  return ThetaMatrix(n, m);
}

}  // namespace ncmech::testing
