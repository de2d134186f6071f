#pragma once

#include "ncmech/polynomial.hpp"
#include "ncmech/theta.hpp"

namespace ncmech {

/// {F,G} = Σ_{k,l} (∂_k F) θ^{kl} (∂_l G) on functions of position only.
Polynomial poisson_bracket_config(const Polynomial& F, const Polynomial& G, const ThetaMatrix& theta);

/// {...{{F, f}, f}, ..., f} with m nested brackets; m = 0 returns F.
Polynomial nested_bracket(const Polynomial& F, const Polynomial& f, unsigned m, const ThetaMatrix& theta);

}  // namespace ncmech
