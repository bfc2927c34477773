#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "jetflow/scalar.hpp"

namespace jetflow {

// Coefficients with magnitude at or below this are dropped after truncation in float mode.
inline constexpr double kDefaultDropTolerance = 1e-12;

class Monomial {
public:
    using Exponent = std::uint16_t;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
    Monomial(std::initializer_list<unsigned> exps);
    explicit Monomial(std::span<const unsigned> exps);

    static Monomial unit(std::size_t nvars, std::size_t var);

    std::size_t size() const noexcept { return exps_.size(); }
    unsigned operator[](std::size_t i) const noexcept { return exps_[i]; }
    unsigned degree() const noexcept { return degree_; }

    void set(std::size_t i, unsigned e);

    Monomial operator*(const Monomial& o) const;
    bool divides(const Monomial& o) const;
    // o / *this; requires divides(o).
    Monomial quotient_of(const Monomial& o) const;

    std::vector<unsigned> exponents() const { return {exps_.begin(), exps_.end()}; }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.degree_ == b.degree_ && a.exps_ == b.exps_;
    }

    std::size_t hash() const noexcept;

private:
    boost::container::small_vector<Exponent, 4> exps_;
    unsigned degree_ = 0;
};

// Graded order: total degree first, then the monomial with the larger
// leading exponent (x1 before x2 ...) comes first within a degree.
struct GradedLess {
    bool operator()(const Monomial& a, const Monomial& b) const noexcept;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

struct Term {
    Monomial monomial;
    Scalar coef;
};

// Sparse multivariate polynomial. Terms are kept sorted by GradedLess with no
// zero coefficients, so equal polynomials have identical term lists.
class MultiPoly {
public:
    MultiPoly() = default;
    explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {}

    static MultiPoly constant(std::size_t nvars, const Scalar& c);
    static MultiPoly variable(std::size_t nvars, std::size_t var, ScalarMode mode = ScalarMode::exact);
    static MultiPoly term(const Monomial& m, const Scalar& c);
    // Builds from arbitrary (possibly repeated, unordered, zero) terms.
    static MultiPoly from_terms(std::size_t nvars, std::vector<Term> terms);

    std::size_t nvars() const noexcept { return nvars_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    // Mode of the coefficients; nullopt for the zero polynomial.
    std::optional<ScalarMode> mode() const;

    Scalar coefficient(const Monomial& m) const;
    Scalar constant_term() const;

    // Largest total degree; 0 for the zero polynomial.
    unsigned degree() const noexcept { return terms_.empty() ? 0 : terms_.back().monomial.degree(); }

    MultiPoly operator-() const;
    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    MultiPoly& operator*=(const Scalar& c);

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(MultiPoly a, const Scalar& c) { return a *= c; }
    friend MultiPoly operator*(const Scalar& c, MultiPoly a) { return a *= c; }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        if (a.terms_.size() != b.terms_.size() || a.nvars_ != b.nvars_) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (!(a.terms_[i].monomial == b.terms_[i].monomial) || !(a.terms_[i].coef == b.terms_[i].coef))
                return false;
        return true;
    }

    MultiPoly pow(unsigned e) const;
    MultiPoly to_mode(ScalarMode mode) const;

private:
    void check_compatible(const MultiPoly& o) const;
    void merge_in(const MultiPoly& o, bool subtract);

    std::size_t nvars_ = 0;
    std::vector<Term> terms_;
};

// Homogeneous polynomial with its declared degree. The zero polynomial is
// homogeneous of every degree.
class HomogPoly {
public:
    HomogPoly() = default;
    HomogPoly(MultiPoly p, unsigned degree);

    const MultiPoly& poly() const noexcept { return poly_; }
    unsigned degree() const noexcept { return degree_; }
    std::size_t nvars() const noexcept { return poly_.nvars(); }
    bool is_zero() const noexcept { return poly_.is_zero(); }

    friend bool operator==(const HomogPoly& a, const HomogPoly& b) {
        return a.degree_ == b.degree_ && a.poly_ == b.poly_;
    }

private:
    MultiPoly poly_;
    unsigned degree_ = 0;
};

// m-tuple of polynomials in n variables, optionally carrying a truncation order.
struct PolyMap {
    std::size_t nvars = 0;
    std::vector<MultiPoly> coords;
    std::optional<unsigned> trunc;

    PolyMap() = default;
    PolyMap(std::vector<MultiPoly> c, std::optional<unsigned> k = std::nullopt);

    static PolyMap identity(std::size_t n, ScalarMode mode = ScalarMode::exact,
                            std::optional<unsigned> k = std::nullopt);
    static PolyMap zero(std::size_t nvars, std::size_t ncoords);

    std::size_t ncoords() const noexcept { return coords.size(); }
    const MultiPoly& operator[](std::size_t i) const { return coords[i]; }
    std::optional<ScalarMode> mode() const;
    bool has_zero_constant_terms() const;

    // Coordinatewise equality; truncation fields are ignored.
    friend bool operator==(const PolyMap& a, const PolyMap& b) {
        return a.nvars == b.nvars && a.coords == b.coords;
    }

    PolyMap operator-(const PolyMap& o) const;
    PolyMap operator+(const PolyMap& o) const;
};

// --- Ring kernels -----------------------------------------------------------

// Reference product: straightforward double loop accumulating into a hash map.
MultiPoly mul_serial(const MultiPoly& a, const MultiPoly& b,
                     std::optional<unsigned> max_degree = std::nullopt);
// OpenMP product: terms of `a` are split across threads, partial sums merged.
// Produces exactly the same result as mul_serial.
MultiPoly mul_parallel(const MultiPoly& a, const MultiPoly& b,
                       std::optional<unsigned> max_degree = std::nullopt);
// Dispatches on problem size; drops products of degree > max_degree.
MultiPoly mul_truncated(const MultiPoly& a, const MultiPoly& b, std::optional<unsigned> max_degree);

// --- Operations ---------------------------------------------------------------

// All monomials of the given total degree, in GradedLess order.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned degree);

// Zero-based variable index.
MultiPoly partial_derivative(const MultiPoly& f, std::size_t var);

HomogPoly homogeneous_part(const MultiPoly& f, unsigned degree);
// Smallest total degree carrying a nonzero term; nullopt (infinite) for zero.
std::optional<unsigned> min_degree(const MultiPoly& f);

MultiPoly truncate(const MultiPoly& f, unsigned order, double drop_tol = kDefaultDropTolerance);
PolyMap truncate(const PolyMap& F, unsigned order, double drop_tol = kDefaultDropTolerance);
// Float mode only: removes coefficients with |c| <= tol (no-op in exact mode).
MultiPoly drop_small(const MultiPoly& f, double tol);

// j^K(F o G). G must have zero constant terms; F.nvars == G.ncoords().
PolyMap compose(const PolyMap& F, const PolyMap& G, unsigned order);
MultiPoly compose(const MultiPoly& f, const PolyMap& G, unsigned order);

// Reusable substitution x -> G(x) truncated at a fixed order. Monomial powers
// of G are memoized so several polynomials can be pushed through one G.
class Substitution {
public:
    Substitution(const PolyMap& G, unsigned order);
    MultiPoly apply(const MultiPoly& f);
    MultiPoly apply(const MultiPoly& f, unsigned order);
    unsigned order() const noexcept { return order_; }

private:
    const MultiPoly& power(const Monomial& m);

    PolyMap G_;
    unsigned order_;
    std::optional<ScalarMode> mode_;
    std::map<Monomial, MultiPoly, GradedLess> cache_;
};

// Exact quotient f / d; throws ErrorKind::NotDivisible when d does not divide f.
MultiPoly divide_exact(const MultiPoly& f, const MultiPoly& d);

Scalar evaluate(const MultiPoly& f, std::span<const Scalar> point);

// Scales f to integer coefficients with content 1 and a positive coefficient on
// the lexicographically leading monomial (largest exponent of x1, then x2, ...).
// Exact mode only. Returns the factor c with f = c * result.
std::pair<MultiPoly, Scalar> primitive_normalize(const MultiPoly& f);
// Lexicographically leading term (x1 > x2 > ...).
const Term& lex_leading_term(const MultiPoly& f);

// --- Printing -------------------------------------------------------------------

std::vector<std::string> default_variable_names(std::size_t n);
std::string to_string(const MultiPoly& f, const std::vector<std::string>& vars = {});
std::string to_string(const PolyMap& F, const std::vector<std::string>& vars = {});
std::ostream& operator<<(std::ostream& os, const MultiPoly& f);
std::ostream& operator<<(std::ostream& os, const PolyMap& F);

} // namespace jetflow
