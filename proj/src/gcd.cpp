#include "jetflow/gcd.hpp"

#include <algorithm>

namespace jetflow {

namespace {

void require_binary_exact(const HomogPoly& f) {
    if (f.nvars() != 2)
        throw Error(ErrorKind::DimensionMismatch,
                    "binary form expected, got " + std::to_string(f.nvars()) + " variables");
    if (f.poly().mode() == ScalarMode::floating)
        throw Error(ErrorKind::ModeMismatch, "bivariate gcd requires exact coefficients");
}

// Smallest exponent of each variable over the terms of a nonzero form.
std::pair<unsigned, unsigned> min_exponents(const MultiPoly& f) {
    unsigned ax = ~0u, ay = ~0u;
    for (const auto& t : f.terms()) {
        ax = std::min(ax, t.monomial[0]);
        ay = std::min(ay, t.monomial[1]);
    }
    return {ax, ay};
}

HomogPoly strip_monomial(const HomogPoly& f, unsigned ax, unsigned ay) {
    std::vector<Term> out;
    for (const auto& t : f.poly().terms())
        out.push_back({Monomial{t.monomial[0] - ax, t.monomial[1] - ay}, t.coef});
    return HomogPoly(MultiPoly::from_terms(2, std::move(out)), f.degree() - ax - ay);
}

HomogPoly normalized(const MultiPoly& p, unsigned degree) {
    return HomogPoly(primitive_normalize(p).first, degree);
}

} // namespace

UPoly dehomogenize(const HomogPoly& f) {
    if (f.nvars() != 2) throw Error(ErrorKind::DimensionMismatch, "binary form expected");
    std::vector<mpq_class> c(f.degree() + 1, mpq_class(0));
    for (const auto& t : f.poly().terms()) c[t.monomial[0]] += t.coef.rational_value();
    return UPoly(std::move(c));
}

HomogPoly homogenize(const UPoly& u, unsigned degree, ScalarMode mode) {
    if (u.degree() > static_cast<int>(degree))
        throw Error(ErrorKind::InvalidArgument, "homogenization degree below polynomial degree");
    std::vector<Term> out;
    for (std::size_t i = 0; i < u.coeffs().size(); ++i) {
        if (sgn(u.coeffs()[i]) == 0) continue;
        out.push_back({Monomial{static_cast<unsigned>(i), degree - static_cast<unsigned>(i)},
                       Scalar(u.coeffs()[i]).to_mode(mode)});
    }
    return HomogPoly(MultiPoly::from_terms(2, std::move(out)), degree);
}

HomogPoly bivariate_homog_gcd(const HomogPoly& f, const HomogPoly& g) {
    require_binary_exact(f);
    require_binary_exact(g);
    if (f.is_zero() && g.is_zero()) throw Error(ErrorKind::InvalidArgument, "gcd of two zero forms");
    if (f.is_zero()) return normalized(g.poly(), g.degree());
    if (g.is_zero()) return normalized(f.poly(), f.degree());

    auto [fx, fy] = min_exponents(f.poly());
    auto [gx, gy] = min_exponents(g.poly());
    const unsigned mx = std::min(fx, gx), my = std::min(fy, gy);

    // Neither stripped form is divisible by y, so dehomogenizing keeps the full degree.
    UPoly uf = dehomogenize(strip_monomial(f, fx, fy));
    UPoly ug = dehomogenize(strip_monomial(g, gx, gy));
    UPoly common = gcd(uf, ug);
    const auto d = static_cast<unsigned>(std::max(common.degree(), 0));
    HomogPoly core = homogenize(common, d);

    MultiPoly result = core.poly() * MultiPoly::term(Monomial{mx, my}, Scalar(1));
    return normalized(result, d + mx + my);
}

HomogPoly bivariate_homog_gcd(const std::vector<HomogPoly>& forms) {
    std::optional<HomogPoly> acc;
    for (const auto& f : forms) {
        if (f.is_zero()) continue;
        acc = acc ? bivariate_homog_gcd(*acc, f) : bivariate_homog_gcd(f, HomogPoly(MultiPoly(2), 0));
    }
    if (!acc) throw Error(ErrorKind::InvalidArgument, "gcd of zero forms only");
    return *acc;
}

} // namespace jetflow
