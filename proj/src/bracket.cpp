#include "ncmech/bracket.hpp"

#include <string>

#include "ncmech/error.hpp"

namespace ncmech {

Polynomial poisson_bracket_config(const Polynomial& F, const Polynomial& G, const ThetaMatrix& theta) {
  const std::size_t n = theta.n();
  if (F.nvars() != n || G.nvars() != n) {
    throw DimensionError("poisson_bracket_config: polynomials over " + std::to_string(F.nvars()) + " and " +
                         std::to_string(G.nvars()) + " variables, theta is " + std::to_string(n) + "x" +
                         std::to_string(n));
  }
  require_same_mode(F.mode(), theta.mode(), "poisson_bracket_config");
  Polynomial result(n, F.mode());
  if (F.is_constant() || G.is_constant()) return result;
  std::vector<Polynomial> dG = gradient(G);
  for (std::size_t k = 0; k < n; ++k) {
    Polynomial dF = F.diff(k);
    if (dF.is_zero()) continue;
    Polynomial row(n, F.mode());
    for (std::size_t l = 0; l < n; ++l) {
      if (theta(k, l).is_zero() || dG[l].is_zero()) continue;
      row += dG[l] * theta(k, l);
    }
    result += dF * row;
  }
  return result;
}

Polynomial nested_bracket(const Polynomial& F, const Polynomial& f, unsigned m, const ThetaMatrix& theta) {
  if (F.nvars() != f.nvars()) throw DimensionError("nested_bracket: F and f have different variable counts");
  Polynomial acc = F;
  for (unsigned k = 0; k < m && !acc.is_zero(); ++k) acc = poisson_bracket_config(acc, f, theta);
  return acc;
}

}  // namespace ncmech
