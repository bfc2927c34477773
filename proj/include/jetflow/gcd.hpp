#pragma once

#include "jetflow/poly.hpp"
#include "jetflow/upoly.hpp"

namespace jetflow {

// f(t, 1) for a binary form f(x, y).
UPoly dehomogenize(const HomogPoly& f);
// y^degree * u(x / y); requires degree >= deg u.
HomogPoly homogenize(const UPoly& u, unsigned degree, ScalarMode mode = ScalarMode::exact);

// GCD of two binary forms in Q[x, y], normalized by primitive_normalize.
// Common x- and y-power factors are split off first; the rest is Euclid on the
// dehomogenized forms. Exact mode only.
HomogPoly bivariate_homog_gcd(const HomogPoly& f, const HomogPoly& g);

// Folds bivariate_homog_gcd over a list of forms (zero entries are skipped).
HomogPoly bivariate_homog_gcd(const std::vector<HomogPoly>& forms);

} // namespace jetflow
