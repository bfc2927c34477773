#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace jetflow {

// Dense univariate polynomial over the rationals, coefficients low to high.
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<mpq_class> coeffs);

    static UPoly monomial(unsigned degree, const mpq_class& c = 1);

    bool is_zero() const noexcept { return c_.empty(); }
    // Degree of the zero polynomial is reported as -1.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const std::vector<mpq_class>& coeffs() const noexcept { return c_; }
    mpq_class coeff(unsigned i) const { return i < c_.size() ? c_[i] : mpq_class(0); }
    const mpq_class& leading() const { return c_.back(); }

    UPoly operator-() const;
    friend UPoly operator+(const UPoly& a, const UPoly& b);
    friend UPoly operator-(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const UPoly& a, const mpq_class& c);
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

    mpq_class operator()(const mpq_class& x) const;
    // Sign at +infinity / -infinity.
    int sign_at_pos_inf() const;
    int sign_at_neg_inf() const;

    UPoly derivative() const;
    UPoly monic() const;
    // Scaled to integer coefficients with content 1 and positive leading coefficient.
    UPoly primitive() const;

    std::string str(const std::string& var = "t") const;

private:
    void trim();
    std::vector<mpq_class> c_;
};

struct DivMod {
    UPoly quotient;
    UPoly remainder;
};

DivMod divmod(const UPoly& a, const UPoly& b);
// Monic gcd (zero iff both inputs are zero).
UPoly gcd(const UPoly& a, const UPoly& b);
bool is_squarefree(const UPoly& p);
UPoly squarefree_part(const UPoly& p);
// Yun's algorithm: p = c * prod_k a_k^k with squarefree, pairwise coprime monic
// a_k; result[k - 1] = a_k (trailing constants trimmed).
std::vector<UPoly> squarefree_decomposition(const UPoly& p);

// Sturm chain p, p', -rem(p, p'), ...
std::vector<UPoly> sturm_sequence(const UPoly& p);

// Distinct real roots in the half-open interval (lo, hi]; nullopt bounds mean
// -infinity / +infinity. Exact for any nonzero p.
unsigned count_real_roots(const UPoly& p, const std::optional<mpq_class>& lo = std::nullopt,
                          const std::optional<mpq_class>& hi = std::nullopt);

// Distinct rational roots by the rational root test. Returns nullopt when the
// integer coefficients are too large to enumerate divisors.
std::optional<std::vector<mpq_class>> rational_roots(const UPoly& p);

bool is_rational_square(const mpq_class& q);

} // namespace jetflow
