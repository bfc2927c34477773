#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jetflow/jet.hpp"
#include "jetflow/linalg.hpp"
#include "jetflow/poly.hpp"
#include "jetflow/upoly.hpp"

namespace jetflow {

// Formal determinant of the gradients of n - 1 functions in n variables with
// the basis vectors as last row: coordinate j (1-based) is (-1)^{n+j} times the
// minor obtained by deleting column j.
PolyMap cross_product_field(const std::vector<MultiPoly>& G);

struct ReducedHamiltonian {
    HomogPoly D;       // normalized gcd of the partials
    PolyMap field;     // (-g_y, g_x) / (D * content)
    Scalar content;    // positive rational removed from the quotient
};

// Planar homogeneous g only; exact mode.
ReducedHamiltonian reduced_hamiltonian(const HomogPoly& g);

enum class Verdict { yes, no, unknown };
std::string to_string(Verdict v);

struct StarReport {
    unsigned p = 0;
    PolyMap initial;                     // P
    Verdict nondivisible = Verdict::unknown;
    std::optional<HomogPoly> witness;    // common factor of positive degree when divisible
};

// Exact for n <= 2 (gcd of the coordinates of P); unknown for n >= 3.
StarReport check_star(const VectorFieldJet& F);

// eta with eta * F_j = H_j for H = cross_product_field(G). Throws NoSuchFactor.
MultiPoly verify_integral_representation(const VectorFieldJet& F, const std::vector<MultiPoly>& G);

// Basis of {V : <grad G_i(x), V x> = 0 for all i}, each as an n x n matrix.
std::vector<Matrix> stabilizer_tangent(const std::vector<MultiPoly>& G);

enum class ExpClass { ClosedLine, Circle, DenseLine, Trivial, Undetermined };
std::string to_string(ExpClass c);

struct ExpSubgroupClass {
    ExpClass tag = ExpClass::Undetermined;
    UPoly minimal_polynomial;
    unsigned zero_root = 0;              // epsilon in m(s) = s^eps r(-s^2)
    std::optional<UPoly> reduced;        // r, when m has that form
    std::vector<mpq_class> frequencies;  // rational c_j (squared frequencies), when r splits over Q
    std::string evidence;
};

ExpSubgroupClass classify_exp_subgroup(const Matrix& L);

// Minimal polynomial over Q via the first linear dependency among I, L, L^2, ...
UPoly minimal_polynomial(const Matrix& L);

struct FormProfile {
    unsigned l = 0;                  // distinct real linear factors
    unsigned q = 0;                  // distinct definite quadratic factors
    unsigned degree = 0;             // deg g
    unsigned squarefree_degree = 0;
    unsigned field_degree = 0;       // degree of the reduced Hamiltonian field
    bool degree_formula_holds = false;
    // multiplicity -> number of distinct factors of that kind with it
    std::map<unsigned, unsigned> linear_multiplicities;
    std::map<unsigned, unsigned> quadratic_multiplicities;
};

FormProfile binary_form_profile(const HomogPoly& g);

} // namespace jetflow
