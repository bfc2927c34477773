#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "jetflow/poly.hpp"

namespace jetflow {

// 1 on |s| <= 1/2, 0 on |s| >= 1, smooth and monotone in between.
double bump(double s);

using Evaluator = std::function<double(std::span<const double>)>;

struct BorelRealization {
    std::vector<HomogPoly> omegas;
    std::vector<double> radii;   // strictly decreasing, radii[i] <= 2^-i
    Evaluator evaluator;         // sum_i bump(|x| / radii[i]) * omegas[i](x)

    std::size_t nvars() const { return omegas.empty() ? 0 : omegas.front().nvars(); }
    // Radius of the ball on which every bump is identically 1.
    double plateau() const { return radii.empty() ? 0.0 : radii.back() / 2; }
    double operator()(std::span<const double> x) const { return evaluator(x); }
};

// omegas[i] must be homogeneous of degree i (zero allowed). The radius of
// omegas[i] is min(2^-i, 1/(1 + M_i), radii[i-1]/2) where M_i is i! times the
// sum of absolute coefficients.
BorelRealization realize_jet(const std::vector<HomogPoly>& omegas);

struct TaylorEstimate {
    Monomial monomial;
    double value;   // approximates D^m f(0) / m!
};

// Central differences for every monomial of degree <= k on the nodes -w..w
// per axis, w = max(1, ceil(k/2)), tensor products for n = 2. Exact on
// polynomials of degree <= 2w in each variable. When `plateau` is given, a
// stencil node farther than it from the origin throws StencilOutsidePlateau.
std::vector<TaylorEstimate> finite_diff_jet(const Evaluator& f, std::size_t nvars, unsigned k, double h,
                                            std::optional<double> plateau = std::nullopt);
std::vector<TaylorEstimate> finite_diff_jet(const BorelRealization& r, unsigned k, double h);
// Largest step keeping the stencil inside the plateau.
double default_step(const BorelRealization& r, unsigned k);

// Weights c_j, j = -k..k, with sum_j c_j j^q = [q == m] for q <= 2k.
std::vector<double> stencil_weights(unsigned k, unsigned m);

} // namespace jetflow
