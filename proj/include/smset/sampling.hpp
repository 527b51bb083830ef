#pragma once

#include "smset/random.hpp"
#include "smset/superpoly.hpp"

namespace smset {

/// Random bounded-degree polynomial with small rational coefficients.
ScalarExpr random_polynomial(Rng& rng, const std::vector<Sym>& vars, int max_degree = 3,
                             int max_terms = 4);

/// Random element over `amb`. `parity` is -1 for unconstrained, 0/1 for a
/// homogeneous result (the zero element may be returned either way).
SuperPolynomial random_superpoly(Rng& rng, const AmbientPtr& amb, int parity = -1,
                                 int max_degree = 2, int max_terms = 4);

} // namespace smset
