#include "jetflow/fields.hpp"

#include <algorithm>
#include <sstream>

#include "jetflow/gcd.hpp"

namespace jetflow {

namespace {

// Laplace expansion along the first row; the matrices here are at most a few rows.
MultiPoly poly_determinant(const std::vector<std::vector<MultiPoly>>& m, std::size_t nvars) {
    const std::size_t k = m.size();
    if (k == 0) return MultiPoly::constant(nvars, Scalar(1));
    if (k == 1) return m[0][0];
    MultiPoly det(nvars);
    for (std::size_t c = 0; c < k; ++c) {
        if (m[0][c].is_zero()) continue;
        std::vector<std::vector<MultiPoly>> minor;
        for (std::size_t r = 1; r < k; ++r) {
            std::vector<MultiPoly> row;
            for (std::size_t j = 0; j < k; ++j)
                if (j != c) row.push_back(m[r][j]);
            minor.push_back(std::move(row));
        }
        MultiPoly term = m[0][c] * poly_determinant(minor, nvars);
        if (c % 2) det -= term;
        else det += term;
    }
    return det;
}

// Positive rational c with f_i / c integral and coprime across all coordinates.
Scalar map_content(const PolyMap& F) {
    mpz_class g = 0, l = 1;
    for (const auto& c : F.coords)
        for (const auto& t : c.terms()) {
            const mpq_class& q = t.coef.rational_value();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.get_num_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
        }
    if (g == 0) return Scalar(1);
    mpq_class c(g, l);
    c.canonicalize();
    return Scalar(c);
}

void require_planar_form(const HomogPoly& g, const char* what) {
    if (g.nvars() != 2) throw Error(ErrorKind::DimensionMismatch, std::string(what) + " needs a form in 2 variables");
    if (g.poly().mode() == ScalarMode::floating)
        throw Error(ErrorKind::ModeMismatch, std::string(what) + " works over exact rationals");
}

} // namespace

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(ExpClass c) {
    switch (c) {
    case ExpClass::ClosedLine: return "ClosedLine";
    case ExpClass::Circle: return "Circle";
    case ExpClass::DenseLine: return "DenseLine";
    case ExpClass::Trivial: return "Trivial";
    case ExpClass::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

PolyMap cross_product_field(const std::vector<MultiPoly>& G) {
    if (G.empty()) throw Error(ErrorKind::DimensionMismatch, "cross product needs n - 1 >= 1 functions");
    const std::size_t n = G.front().nvars();
    if (G.size() + 1 != n)
        throw Error(ErrorKind::DimensionMismatch, "cross product needs " + std::to_string(n - 1) + " functions in " +
                                                      std::to_string(n) + " variables, got " +
                                                      std::to_string(G.size()));
    std::vector<std::vector<MultiPoly>> grad;
    for (const auto& g : G) {
        if (g.nvars() != n) throw Error(ErrorKind::DimensionMismatch, "functions use different variable counts");
        std::vector<MultiPoly> row;
        for (std::size_t j = 0; j < n; ++j) row.push_back(partial_derivative(g, j));
        grad.push_back(std::move(row));
    }
    std::vector<MultiPoly> out;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<MultiPoly>> minor;
        for (const auto& row : grad) {
            std::vector<MultiPoly> r;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) r.push_back(row[k]);
            minor.push_back(std::move(r));
        }
        MultiPoly d = poly_determinant(minor, n);
        // (-1)^{n + j} with j 1-based
        if ((n + j + 1) % 2) d = -d;
        out.push_back(std::move(d));
    }
    return PolyMap(std::move(out));
}

ReducedHamiltonian reduced_hamiltonian(const HomogPoly& g) {
    require_planar_form(g, "reduced Hamiltonian");
    MultiPoly gx = partial_derivative(g.poly(), 0), gy = partial_derivative(g.poly(), 1);
    if (gx.is_zero() && gy.is_zero()) throw Error(ErrorKind::InvalidArgument, "gradient vanishes: g is constant");
    const unsigned dg = g.degree() - 1;
    HomogPoly D = bivariate_homog_gcd(HomogPoly(gx, dg), HomogPoly(gy, dg));
    PolyMap F({divide_exact(-gy, D.poly()), divide_exact(gx, D.poly())});
    Scalar c = map_content(F);
    for (auto& coord : F.coords) coord *= Scalar(1) / c;
    return {D, F, c};
}

StarReport check_star(const VectorFieldJet& F) {
    StarReport r;
    r.p = F.flat_order();
    r.initial = F.initial_map();
    const std::size_t n = F.nvars();
    if (n >= 3) return r;
    std::vector<HomogPoly> forms;
    for (const auto& c : F.initial_part()) forms.push_back(HomogPoly(c.poly().to_mode(ScalarMode::exact), c.degree()));
    HomogPoly g;
    if (n == 2) {
        g = bivariate_homog_gcd(forms);
    } else {
        // One variable: the gcd is the monomial part x^p of the single coordinate.
        g = HomogPoly(MultiPoly::variable(1, 0).pow(r.p), r.p);
    }
    if (g.degree() == 0) {
        r.nondivisible = Verdict::yes;
    } else {
        r.nondivisible = Verdict::no;
        r.witness = g;
    }
    return r;
}

MultiPoly verify_integral_representation(const VectorFieldJet& F, const std::vector<MultiPoly>& G) {
    const PolyMap H = cross_product_field(G);
    const PolyMap& f = F.field();
    if (H.ncoords() != f.ncoords() || H.nvars != f.nvars)
        throw Error(ErrorKind::DimensionMismatch, "field and functions live in different dimensions");
    std::size_t j = 0;
    while (j < f.ncoords() && f.coords[j].is_zero()) ++j;
    MultiPoly eta;
    try {
        eta = divide_exact(H.coords[j], f.coords[j]);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotDivisible) throw;
        throw Error(ErrorKind::NoSuchFactor, "coordinate " + std::to_string(j + 1) + " of the cross product (" +
                                                 to_string(H.coords[j]) + ") is not a multiple of " +
                                                 to_string(f.coords[j]));
    }
    for (std::size_t i = 0; i < f.ncoords(); ++i)
        if (!(eta * f.coords[i] == H.coords[i]))
            throw Error(ErrorKind::NoSuchFactor, "eta = " + to_string(eta) + " fails on coordinate " +
                                                     std::to_string(i + 1));
    return eta;
}

std::vector<Matrix> stabilizer_tangent(const std::vector<MultiPoly>& G) {
    if (G.empty()) throw Error(ErrorKind::InvalidArgument, "stabilizer needs at least one function");
    const std::size_t n = G.front().nvars();
    ScalarMode mode = ScalarMode::exact;
    for (const auto& g : G) {
        if (g.nvars() != n) throw Error(ErrorKind::DimensionMismatch, "functions use different variable counts");
        if (g.mode()) mode = *g.mode();
    }
    // Column (a, b) holds the coefficients of d_a G_i * x_b; rows are (i, monomial).
    std::map<std::pair<std::size_t, Monomial>, std::size_t,
             decltype([](const auto& u, const auto& v) {
                 return u.first != v.first ? u.first < v.first : GradedLess{}(u.second, v.second);
             })>
        row_of;
    std::vector<std::vector<std::pair<std::size_t, Scalar>>> entries(n * n);
    for (std::size_t i = 0; i < G.size(); ++i)
        for (std::size_t a = 0; a < n; ++a) {
            MultiPoly d = partial_derivative(G[i], a);
            for (std::size_t b = 0; b < n; ++b) {
                MultiPoly prod = d * MultiPoly::variable(n, b, mode);
                for (const auto& t : prod.terms()) {
                    auto key = std::make_pair(i, t.monomial);
                    auto [it, fresh] = row_of.try_emplace(key, row_of.size());
                    entries[a * n + b].push_back({it->second, t.coef});
                }
            }
        }
    Matrix A(row_of.size(), n * n, mode);
    for (std::size_t col = 0; col < n * n; ++col)
        for (const auto& [r, c] : entries[col]) A(r, col) += c;

    std::vector<Matrix> basis;
    for (const auto& v : nullspace(A)) {
        Matrix V(n, n, mode);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) V(a, b) = v[a * n + b];
        basis.push_back(std::move(V));
    }
    return basis;
}

UPoly minimal_polynomial(const Matrix& L_in) {
    if (!L_in.is_square()) throw Error(ErrorKind::DimensionMismatch, "minimal polynomial of a non-square matrix");
    const Matrix L = L_in.to_mode(ScalarMode::exact);
    const std::size_t n = L.rows();
    std::vector<Matrix> powers{Matrix::identity(n)};
    for (std::size_t k = 1; k <= n; ++k) {
        powers.push_back(powers.back() * L);
        Matrix K(n * n, k + 1);
        for (std::size_t i = 0; i <= k; ++i)
            for (std::size_t e = 0; e < n * n; ++e) K(e, i) = powers[i].entries()[e];
        auto ns = nullspace(K);
        if (ns.empty()) continue;
        // A first dependency is one-dimensional and involves L^k.
        const auto& v = ns.front();
        std::vector<mpq_class> c;
        for (const auto& s : v) c.push_back(s.rational_value());
        return UPoly(std::move(c)).monic();
    }
    throw Error(ErrorKind::InvalidArgument, "no minimal polynomial found");
}

ExpSubgroupClass classify_exp_subgroup(const Matrix& L) {
    ExpSubgroupClass out;
    if (L.is_zero()) {
        out.tag = ExpClass::Trivial;
        out.minimal_polynomial = UPoly::monomial(1);
        out.evidence = "L = 0";
        return out;
    }
    const UPoly m = minimal_polynomial(L);
    out.minimal_polynomial = m;
    std::ostringstream ev;
    ev << "m(s) = " << m.str("s");
    if (!is_squarefree(m)) {
        out.tag = ExpClass::ClosedLine;
        ev << "; not squarefree (L is not semisimple)";
        out.evidence = ev.str();
        return out;
    }
    // m(s) = s^eps * r(-s^2) requires the cofactor of s^eps to be even.
    const auto& c = m.coeffs();
    std::size_t eps = 0;
    while (sgn(c[eps]) == 0) ++eps;
    out.zero_root = static_cast<unsigned>(eps);
    std::vector<mpq_class> rc;
    bool even = true;
    for (std::size_t k = eps; k < c.size(); ++k) {
        const std::size_t e = k - eps;
        if (e % 2) {
            if (sgn(c[k]) != 0) even = false;
            continue;
        }
        rc.push_back((e / 2) % 2 ? mpq_class(-c[k]) : c[k]);
    }
    if (!even) {
        out.tag = ExpClass::ClosedLine;
        ev << "; eigenvalues not symmetric about the imaginary axis";
        out.evidence = ev.str();
        return out;
    }
    const UPoly r(std::move(rc));
    out.reduced = r;
    ev << "; r(u) = " << r.str("u");
    const unsigned positive = r.degree() > 0 ? count_real_roots(r, mpq_class(0), std::nullopt) : 0;
    if (positive != static_cast<unsigned>(std::max(0, r.degree()))) {
        out.tag = ExpClass::ClosedLine;
        ev << "; r has roots off the positive axis (eigenvalues off the imaginary axis)";
        out.evidence = ev.str();
        return out;
    }
    auto roots = rational_roots(r);
    if (!roots || roots->size() != static_cast<std::size_t>(r.degree())) {
        out.tag = ExpClass::Undetermined;
        ev << "; purely imaginary spectrum with irrational squared frequencies";
        out.evidence = ev.str();
        return out;
    }
    out.frequencies = *roots;
    bool commensurable = true;
    for (const auto& cj : out.frequencies) {
        mpq_class ratio = cj / out.frequencies.front();
        if (!is_rational_square(ratio)) commensurable = false;
    }
    out.tag = commensurable ? ExpClass::Circle : ExpClass::DenseLine;
    ev << "; squared frequencies";
    for (const auto& cj : out.frequencies) ev << ' ' << cj.get_str();
    ev << (commensurable ? "; all ratios are rational squares" : "; some ratio is not a rational square");
    out.evidence = ev.str();
    return out;
}

FormProfile binary_form_profile(const HomogPoly& g) {
    require_planar_form(g, "binary form profile");
    if (g.is_zero()) throw Error(ErrorKind::InvalidArgument, "profile of the zero form");
    FormProfile prof;
    prof.degree = g.degree();
    const UPoly u = dehomogenize(g);
    const unsigned y_mult = g.degree() - static_cast<unsigned>(u.degree());
    if (y_mult > 0) {
        prof.l += 1;
        prof.linear_multiplicities[y_mult] += 1;
    }
    const auto parts = squarefree_decomposition(u);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const auto& a = parts[k];
        if (a.degree() <= 0) continue;
        const unsigned mult = static_cast<unsigned>(k + 1);
        const unsigned real = count_real_roots(a);
        const unsigned complex_pairs = (static_cast<unsigned>(a.degree()) - real) / 2;
        prof.l += real;
        prof.q += complex_pairs;
        if (real) prof.linear_multiplicities[mult] += real;
        if (complex_pairs) prof.quadratic_multiplicities[mult] += complex_pairs;
    }
    prof.squarefree_degree = prof.l + 2 * prof.q;
    if (g.degree() >= 1) {
        const auto rh = reduced_hamiltonian(g);
        unsigned deg = 0;
        for (const auto& c : rh.field.coords)
            if (!c.is_zero()) deg = std::max(deg, c.degree());
        prof.field_degree = deg;
        prof.degree_formula_holds = static_cast<int>(deg) == static_cast<int>(prof.l + 2 * prof.q) - 1;
    }
    return prof;
}

} // namespace jetflow
