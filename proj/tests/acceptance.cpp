// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "jetflow/borel.hpp"
#include "jetflow/fields.hpp"
#include "jetflow/jet.hpp"
#include "jetflow/recover.hpp"
#include "support.hpp"

using namespace jetflow;
using namespace testing;

namespace {

struct Check {
    bool ok = true;
    std::string note;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            note = what;
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs >= limit_s) c.require(false, "took " + std::to_string(secs) + " s");
    if (!c.ok) ++failures;
    std::printf("[%s] %2d. %s (%.3f s)%s%s\n", c.ok ? "PASS" : "FAIL", id, title, secs, c.ok ? "" : ": ",
                c.note.c_str());
    std::fflush(stdout);
}

MultiPoly factorial_times(const MultiPoly& p, unsigned i) {
    long f = 1;
    for (unsigned k = 2; k <= i; ++k) f *= k;
    return p * Scalar(f);
}

// (x^2+y^2)(x^2+2y^2): -g_y/2 and g_x/2 expanded by hand.
PolyMap quartic_field() {
    return PolyMap({poly(2, {{{2, 1}, -3}, {{0, 3}, -4}}), poly(2, {{{3, 0}, 2}, {{1, 2}, 3}})});
}

// Field with flat order exactly p: random nonzero p-homogeneous part plus
// random terms of degree p+1 and p+2.
PolyMap random_field(Rng& rng, std::size_t n, unsigned p) {
    std::vector<MultiPoly> coords;
    bool nonzero = false;
    for (std::size_t i = 0; i < n; ++i) {
        auto c = rng.homogeneous(n, p, 0.6, 3);
        nonzero |= !c.is_zero();
        coords.push_back(c + rng.polynomial(n, p + 1, p + 2, 0.4, 3));
    }
    if (!nonzero) coords[0] += var(n, 0).pow(p);
    return PolyMap(coords);
}

MultiPoly random_homogeneous_nonzero(Rng& rng, std::size_t n, unsigned d, long bound) {
    for (;;) {
        auto p = rng.homogeneous(n, d, 0.7, bound);
        if (!p.is_zero()) return p;
    }
}

} // namespace

int main() {
    Rng rng(20261016);

    criterion(1, "flow of x' = x^2: v_i = i! x^(i+1) for i <= 10", 1.0, [](Check& c) {
        VectorFieldJet F(PolyMap({var(1, 0).pow(2)}));
        auto jet = flow_taylor_coeffs(F, 10, 11);
        // The exact flow is x / (1 - t x) = sum_i S_i t^i; matching powers of t
        // in (1 - t x) S = x gives S_0 = x, S_i = x S_(i-1). Then v_i = i! S_i.
        MultiPoly S = var(1, 0);
        for (unsigned i = 1; i <= 10; ++i) {
            S = var(1, 0) * S;
            c.require(jet.coeffs[i - 1].coords[0] == factorial_times(S, i), "v_" + std::to_string(i));
        }
    });

    criterion(2, "initial jet of shifts: j^(3+l)(F_w) = id + P*w, 50 random w", 0, [&](Check& c) {
        VectorFieldJet F(quartic_field());
        const auto P = F.initial_map();
        for (int k = 0; k < 50; ++k) {
            const unsigned l = static_cast<unsigned>(k % 5);
            auto w = rng.homogeneous(2, l, 0.8, 5);
            for (const auto& t : w.terms())
                c.require(t.coef.abs() <= Scalar(5), "coefficient bound");
            auto h = shift_jet(F, w, 3 + l);
            PolyMap expected({var(2, 0) + P.coords[0] * w, var(2, 1) + P.coords[1] * w});
            c.require(h == truncate(expected, 3 + l), "sample " + std::to_string(k));
        }
    });

    criterion(3, "order bound j^(i(p-1))(v_i) = 0, i <= 8, 20 random fields", 0, [&](Check& c) {
        for (int k = 0; k < 20; ++k) {
            const std::size_t n = 1 + static_cast<std::size_t>(k % 2);
            const unsigned p = 2 + static_cast<unsigned>((k / 2) % 2);
            VectorFieldJet F(random_field(rng, n, p));
            c.require(F.flat_order() == p, "flat order");
            auto jet = flow_taylor_coeffs(F, 8, 8 * (p - 1) + 1);
            for (unsigned i = 1; i <= 8; ++i) {
                bool low_vanishes = true;
                for (const auto& coord : jet.coeffs[i - 1].coords) {
                    auto m = min_degree(coord);
                    low_vanishes &= !m || *m > i * (p - 1);
                }
                c.require(low_vanishes, "field " + std::to_string(k) + ", v_" + std::to_string(i));
            }
        }
    });

    criterion(4, "exact round trip, p = 3, 25 random alpha of degree <= 6, K = 10", 30.0, [&](Check& c) {
        VectorFieldJet F(quartic_field());
        for (int k = 0; k < 25; ++k) {
            auto alpha = rng.polynomial(2, 0, 6, 0.5, 5);
            auto h = shift_jet(F, alpha, 10);
            auto res = recover_shift_jet(F, h, 10);
            c.require(res.omegas.size() == 8, "number of omegas");
            for (unsigned l = 0; l < 8 && l < res.omegas.size(); ++l) {
                // Oracle: the degree-l terms of alpha, collected directly.
                std::vector<Term> part;
                for (const auto& t : alpha.terms())
                    if (t.monomial.degree() == l) part.push_back(t);
                c.require(res.omegas[l].poly() == MultiPoly::from_terms(2, part),
                          "alpha " + std::to_string(k) + ", omega_" + std::to_string(l));
            }
            c.require(res.residual_ok && verify_residual(F, h, res.omegas, 10), "residual");
        }
    });

    criterion(5, "float round trip, F = (-4x, 3y), alpha = 0.25 + x^2", 0, [](Check& c) {
        auto x = MultiPoly::variable(2, 0, ScalarMode::floating);
        auto y = MultiPoly::variable(2, 1, ScalarMode::floating);
        VectorFieldJet F(PolyMap({x * Scalar(-4.0), y * Scalar(3.0)}));
        auto alpha = MultiPoly::constant(2, Scalar(0.25)) + x.pow(2);
        auto res = recover_shift_jet(F, shift_jet(F, alpha, 6), 6);
        c.require(res.omegas.size() >= 3, "number of omegas");
        c.require(std::abs(res.omegas[0].poly().constant_term().to_double() - 0.25) <= 1e-6, "omega_0");
        const auto& w2 = res.omegas[2].poly();
        for (const auto& m : monomials_of_degree(2, 2)) {
            const double want = m == Monomial{2, 0} ? 1.0 : 0.0;
            c.require(std::abs(w2.coefficient(m).to_double() - want) <= 1e-6, "omega_2");
        }
        c.require(res.residual_ok, "residual");
    });

    criterion(6, "reduce-ham x^3 y^4 and property (*) examples", 0, [](Check& c) {
        auto rh = reduced_hamiltonian(HomogPoly(poly(2, {{{3, 4}, 1}}), 7));
        c.require(rh.D.poly() == poly(2, {{{2, 3}, 1}}), "D = x^2 y^3");
        c.require(rh.field == PolyMap({poly(2, {{{1, 0}, -4}}), poly(2, {{{0, 1}, 3}})}), "F = (-4x, 3y)");
        c.require(check_star(VectorFieldJet(rh.field)).nondivisible == Verdict::yes, "nondivisible = yes");
        auto s = check_star(VectorFieldJet(PolyMap({poly(2, {{{3, 3}, -4}}), poly(2, {{{2, 4}, 3}})})));
        c.require(s.nondivisible == Verdict::no, "nondivisible = no");
        c.require(s.witness && s.witness->poly() == poly(2, {{{2, 3}, 1}}), "witness x^2 y^3");
    });

    criterion(7, "degree formula p = l + 2q - 1 on 20 generated binary forms", 0, [&](Check& c) {
        for (int k = 0; k < 20; ++k) {
            const unsigned l = static_cast<unsigned>(k % 4), q = static_cast<unsigned>(1 + (k / 4) % 3) - (l ? 1 : 0);
            MultiPoly g = cst(2, 1);
            std::vector<std::pair<long, long>> lines;  // (a, b) for a*x + b*y, pairwise non-proportional
            while (lines.size() < l) {
                long a = rng.integer(-3, 3), b = rng.integer(-3, 3);
                if (a == 0 && b == 0) continue;
                bool fresh = true;
                for (auto [a2, b2] : lines) fresh &= a * b2 != a2 * b;
                if (!fresh) continue;
                lines.emplace_back(a, b);
                g = g * (var(2, 0) * Scalar(a) + var(2, 1) * Scalar(b));
            }
            std::vector<std::pair<long, long>> quads;  // (x - r y)^2 + s y^2, s > 0, distinct (r, s)
            while (quads.size() < q) {
                long r = rng.integer(-3, 3), s = rng.integer(1, 4);
                bool fresh = true;
                for (auto [r2, s2] : quads) fresh &= r != r2 || s != s2;
                if (!fresh) continue;
                quads.emplace_back(r, s);
                auto u = var(2, 0) - var(2, 1) * Scalar(r);
                g = g * (u * u + var(2, 1).pow(2) * Scalar(s));
            }
            const unsigned d = l + 2 * q;
            auto rh = reduced_hamiltonian(HomogPoly(g, d));
            unsigned field_degree = 0;
            for (const auto& coord : rh.field.coords) field_degree = std::max(field_degree, coord.degree());
            c.require(field_degree == l + 2 * q - 1, "field degree, sample " + std::to_string(k));
            auto prof = binary_form_profile(HomogPoly(g, d));
            c.require(prof.l == l && prof.q == q, "profile (l, q), sample " + std::to_string(k));
            c.require(prof.degree_formula_holds, "formula flag");
        }
    });

    criterion(8, "group law j^8(F_a o F_b) = j^8(F_(a o F_b + b)), 25 samples", 0, [&](Check& c) {
        for (int k = 0; k < 25; ++k) {
            const std::size_t n = 1 + static_cast<std::size_t>(k % 2);
            const unsigned p = 2 + static_cast<unsigned>((k / 2) % 2);
            VectorFieldJet F(random_field(rng, n, p));
            auto a = rng.polynomial(n, 1, 3, 0.5, 3), b = rng.polynomial(n, 1, 3, 0.5, 3);
            auto Fb = shift_jet(F, b, 8);
            auto lhs = compose(shift_jet(F, a, 8), Fb, 8);
            auto rhs = shift_jet(F, compose(a, Fb, 8) + b, 8);
            c.require(lhs == rhs, "sample " + std::to_string(k));
        }
    });

    criterion(9, "stabilizers of x^2 + y^2 and x^4 + 3x^2y^2 + 2y^4", 0, [](Check& c) {
        auto b = stabilizer_tangent({poly(2, {{{2, 0}, 1}, {{0, 2}, 1}})});
        c.require(b.size() == 1, "dimension 1");
        if (b.size() == 1) {
            const auto& V = b[0];
            // A multiple of [[0, 1], [-1, 0]].
            c.require(V(0, 0).is_zero() && V(1, 1).is_zero() && !V(0, 1).is_zero() && V(0, 1) == -V(1, 0),
                      "rotation generator");
        }
        c.require(stabilizer_tangent({poly(2, {{{4, 0}, 1}, {{2, 2}, 3}, {{0, 4}, 2}})}).empty(), "trivial");
    });

    criterion(10, "cross product under y = A x: H_(g o A)(y) = det A * A^-1 * H(Ay)", 0, [&](Check& c) {
        int done = 0;
        while (done < 20) {
            Scalar a = rng.rational(4, 3), b = rng.rational(4, 3), cc = rng.rational(4, 3), d = rng.rational(4, 3);
            Scalar det = a * d - b * cc;
            if (det.is_zero()) continue;
            ++done;
            auto g = random_homogeneous_nonzero(rng, 2, 2 + static_cast<unsigned>(done % 3), 4);
            auto x = var(2, 0), y = var(2, 1);
            PolyMap Ay({x * a + y * b, x * cc + y * d});
            auto lhs = cross_product_field({compose(g, Ay, 10)});
            auto H = compose(cross_product_field({g}), Ay, 10);
            // det(A) * A^-1 = [[d, -b], [-c, a]]
            PolyMap rhs({H.coords[0] * d - H.coords[1] * b, H.coords[1] * a - H.coords[0] * cc});
            c.require(lhs == rhs, "sample " + std::to_string(done));
        }
    });

    criterion(11, "Borel realization of [1, x, x^2, 0, x^4], finite differences to order 4", 1.0, [](Check& c) {
        auto x = var(1, 0);
        std::vector<HomogPoly> jets{HomogPoly(cst(1, 1), 0), HomogPoly(x, 1), HomogPoly(x.pow(2), 2),
                                    HomogPoly(MultiPoly(1), 3), HomogPoly(x.pow(4), 4)};
        auto r = realize_jet(jets);
        auto est = finite_diff_jet(r, 4, default_step(r, 4));
        const double want[] = {1, 1, 1, 0, 1};
        for (unsigned d = 0; d <= 4; ++d)
            c.require(std::abs(est[d].value - want[d]) <= 1e-4 * std::max(1.0, std::abs(want[d])),
                      "order " + std::to_string(d));
    });

    criterion(12, "closures of exp(Lt): rotation, diag(1,-1), rotations with c = 1, 2", 0, [](Check& c) {
        auto mat = [](std::size_t n, std::initializer_list<long> e) {
            std::vector<Scalar> v;
            for (long x : e) v.emplace_back(x);
            return Matrix(n, n, v);
        };
        c.require(classify_exp_subgroup(mat(2, {0, -1, 1, 0})).tag == ExpClass::Circle, "Circle");
        c.require(classify_exp_subgroup(mat(2, {1, 0, 0, -1})).tag == ExpClass::ClosedLine, "ClosedLine");
        auto block = mat(4, {0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -2, 0, 0, 1, 0});
        c.require(classify_exp_subgroup(block).tag == ExpClass::DenseLine, "DenseLine");
    });

    std::printf("%d of 12 criteria failed\n", failures);
    return failures ? 1 : 0;
}
