#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "jetflow/jet.hpp"
#include "support.hpp"

using namespace jetflow;
using namespace testing;

namespace {

VectorFieldJet square_field() { return VectorFieldJet(PolyMap({var(1, 0).pow(2)})); }

// Random field in n variables with flat order exactly p and terms up to degree p + 2.
VectorFieldJet random_field(Rng& rng, std::size_t n, unsigned p) {
    for (;;) {
        std::vector<MultiPoly> c;
        bool nonzero_initial = false;
        for (std::size_t i = 0; i < n; ++i) {
            auto lead = rng.homogeneous(n, p, 0.7, 3);
            nonzero_initial |= !lead.is_zero();
            c.push_back(lead + rng.polynomial(n, p + 1, p + 2, 0.4, 3));
        }
        if (nonzero_initial) return VectorFieldJet(PolyMap(std::move(c)));
    }
}

// Keeps the terms whose degree in the first nx variables is <= kx and in the rest <= kt.
MultiPoly bidegree_filter(const MultiPoly& f, std::size_t nx, unsigned kx, unsigned kt) {
    std::vector<Term> out;
    for (const auto& t : f.terms()) {
        unsigned dx = 0, dt = 0;
        for (std::size_t i = 0; i < t.monomial.size(); ++i) (i < nx ? dx : dt) += t.monomial[i];
        if (dx <= kx && dt <= kt) out.push_back(t);
    }
    return MultiPoly::from_terms(f.nvars(), std::move(out));
}

MultiPoly widen(const MultiPoly& f, std::size_t nvars, std::size_t offset = 0) {
    std::vector<Term> terms;
    for (const auto& t : f.terms()) {
        Monomial m(nvars);
        for (std::size_t i = 0; i < t.monomial.size(); ++i) m.set(i + offset, t.monomial[i]);
        terms.push_back({m, t.coef});
    }
    return MultiPoly::from_terms(nvars, std::move(terms));
}

} // namespace

TEST_SUITE("jet") {

TEST_CASE("vector field validation") {
    auto x = var(2, 0), y = var(2, 1);
    VectorFieldJet F(PolyMap({x * Scalar(-4), y * Scalar(3)}));
    CHECK(F.flat_order() == 1);
    REQUIRE(F.linear_part().has_value());
    CHECK((*F.linear_part())(0, 0) == Scalar(-4));
    CHECK((*F.linear_part())(1, 1) == Scalar(3));
    VectorFieldJet G(PolyMap({y.pow(2), x.pow(3)}));
    CHECK(G.flat_order() == 2);
    CHECK_FALSE(G.linear_part().has_value());
    CHECK(G.initial_map() == PolyMap({y.pow(2), MultiPoly(2)}));
    CHECK_THROWS_AS(VectorFieldJet(PolyMap::zero(2, 2)), Error);
    CHECK_THROWS_AS(VectorFieldJet(PolyMap({x + cst(2, 1), y})), Error);
    CHECK_THROWS_AS(VectorFieldJet(PolyMap({x})), Error);
}

TEST_CASE("flow coefficients of x' = x^2 match the geometric series") {
    // x / (1 - t x) = sum_i x^{i+1} t^i, so v_i = i! x^{i+1}.
    auto flow = flow_taylor_coeffs(square_field(), 10, 12);
    auto x = var(1, 0);
    mpz_class fact = 1;
    for (unsigned i = 1; i <= 10; ++i) {
        fact *= i;
        CHECK(flow.coeffs[i - 1].coords[0] == x.pow(i + 1) * Scalar(mpq_class(fact)));
    }
    CHECK(flow_taylor_coeffs(square_field(), 3, 6).coeffs[2].coords[0] == x.pow(4) * Scalar(6));
}

TEST_CASE("flow coefficients of a linear field are matrix powers") {
    auto x = var(2, 0), y = var(2, 1);
    long L[2][2] = {{1, 2}, {-3, 4}};
    VectorFieldJet F(PolyMap({x * Scalar(L[0][0]) + y * Scalar(L[0][1]), x * Scalar(L[1][0]) + y * Scalar(L[1][1])}));
    auto flow = flow_taylor_coeffs(F, 3, 4);
    long P[2][2] = {{1, 0}, {0, 1}};
    for (unsigned i = 1; i <= 3; ++i) {
        long Q[2][2];
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) Q[r][c] = L[r][0] * P[0][c] + L[r][1] * P[1][c];
        std::copy(&Q[0][0], &Q[0][0] + 4, &P[0][0]);
        for (int r = 0; r < 2; ++r)
            CHECK(flow.coeffs[i - 1].coords[static_cast<std::size_t>(r)] == x * Scalar(P[r][0]) + y * Scalar(P[r][1]));
    }
    CHECK(flow.coeffs[0] == F.field());
}

TEST_CASE("order bound on random fields") {
    Rng rng(101);
    for (int k = 0; k < 10; ++k) {
        for (unsigned p : {2u, 3u}) {
            auto F = random_field(rng, 1 + static_cast<std::size_t>(k % 2), p);
            auto flow = flow_taylor_coeffs(F, 8, 12);
            for (unsigned i = 1; i <= 8; ++i)
                for (const auto& c : flow.coeffs[i - 1].coords) {
                    auto md = min_degree(c);
                    if (md) CHECK(*md > i * (p - 1));
                }
        }
    }
}

TEST_CASE("flow bijet") {
    auto T = flow_bijet(square_field(), 2, 3);
    auto x = var(2, 0), t = var(2, 1);
    auto expect = x + x.pow(2) * t + x.pow(3) * t.pow(2);
    CHECK(bidegree_filter(T.coords[0], 1, 3, 2) == expect);
    std::vector<MultiPoly> slice{var(1, 0), MultiPoly(1)};
    CHECK(compose(T, PolyMap(slice), 5).coords[0] == var(1, 0));
}

TEST_CASE("flow law at jet level") {
    Rng rng(7);
    const unsigned N = 4, K = 5;
    for (int k = 0; k < 4; ++k) {
        auto F = random_field(rng, 2, 2 + static_cast<unsigned>(k % 2));
        auto T = flow_bijet(F, N, K);   // variables x, y, t
        // Variables x, y, s, t.
        std::vector<MultiPoly> inner;
        for (std::size_t j = 0; j < 2; ++j) inner.push_back(widen(T.coords[j], 4));
        inner.push_back(var(4, 3));
        auto lhs = compose(T, PolyMap(inner), K + N);
        std::vector<MultiPoly> shifted{var(4, 0), var(4, 1), var(4, 2) + var(4, 3)};
        auto rhs = compose(T, PolyMap(shifted), K + N);
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(bidegree_filter(lhs.coords[j], 2, K, N) == bidegree_filter(rhs.coords[j], 2, K, N));
    }
}

TEST_CASE("shift jets") {
    auto F = square_field();
    auto x = var(1, 0);
    // Phi(x, x) = x / (1 - x^2).
    CHECK(shift_jet(F, x, 5).coords[0] == x + x.pow(3) + x.pow(5));
    auto c = Scalar::rational(7, 3);
    CHECK(shift_jet(F, x * c, 3).coords[0] == x + x.pow(3) * c);
    CHECK(shift_jet(F, MultiPoly(1), 4) == PolyMap::identity(1));
}

TEST_CASE("hatted shift jets") {
    auto F = square_field();
    auto x = var(1, 0);
    auto h = PolyMap({x + x.pow(2)});
    // Phi(h, x) = h / (1 - x h) = h + x h^2 + x^2 h^3 + ...
    MultiPoly series(1), hp = h.coords[0];
    for (unsigned i = 0; i < 4; ++i) {
        series += x.pow(i) * hp;
        hp = hp * h.coords[0];
    }
    CHECK(hatted_shift_jet(F, h, x, 3).coords[0] == truncate(series, 3));
    CHECK(hatted_shift_jet(F, h, x, 3).coords[0] == x + x.pow(2) + x.pow(3));
    CHECK(hatted_shift_jet(F, h, MultiPoly(1), 4) == truncate(h, 4));
    Rng rng(3);
    auto G = random_field(rng, 2, 2);
    auto a = rng.polynomial(2, 1, 3);
    CHECK(hatted_shift_jet(G, PolyMap::identity(2), a, 6) == shift_jet(G, a, 6));
    CHECK_THROWS_AS(hatted_shift_jet(F, PolyMap({x + cst(1, 1)}), x, 3), Error);
}

TEST_CASE("exact mode rejects a constant time along a linear-part field") {
    VectorFieldJet F(PolyMap({var(1, 0)}));
    CHECK_THROWS_AS(shift_jet(F, cst(1, 1), 3), Error);
}

TEST_CASE("group law") {
    Rng rng(55);
    const unsigned K = 6;
    for (int k = 0; k < 6; ++k) {
        auto F = random_field(rng, 2, 2 + static_cast<unsigned>(k % 2));
        auto a = rng.polynomial(2, 1, 3), b = rng.polynomial(2, 1, 3);
        auto Fa = shift_jet(F, a, K), Fb = shift_jet(F, b, K);
        auto gamma = compose(a, Fb, K) + b;
        CHECK(compose(Fa, Fb, K) == shift_jet(F, gamma, K));
    }
}

TEST_CASE("inverse law") {
    Rng rng(56);
    for (int k = 0; k < 6; ++k) {
        unsigned p = 2 + static_cast<unsigned>(k % 2), l = 1 + static_cast<unsigned>(k % 3);
        auto F = random_field(rng, 2, p);
        auto a = rng.polynomial(2, l, l + 2);
        const unsigned K = p + l;
        CHECK(jet_inverse(shift_jet(F, a, K), K) == truncate(shift_jet(F, -a, K), K));
    }
}

TEST_CASE("jets of shifts determine the shift function") {
    Rng rng(57);
    for (int k = 0; k < 8; ++k) {
        unsigned p = 2 + static_cast<unsigned>(k % 2), l = static_cast<unsigned>(k % 3);
        auto F = random_field(rng, 2, p);
        auto a = rng.polynomial(2, 0, 4);
        auto agree = a + rng.homogeneous(2, l + 1, 0.9);
        auto bump = rng.homogeneous(2, l, 1.0);
        if (bump.is_zero()) bump = cst(2, 1) * var(2, 0).pow(l);
        auto differ = a + bump;
        const unsigned K = p + l;
        CHECK(shift_jet(F, a, K) == shift_jet(F, agree, K));
        CHECK_FALSE(shift_jet(F, a, K) == shift_jet(F, differ, K));
    }
}

TEST_CASE("initial jet of a shift") {
    Rng rng(58);
    for (int k = 0; k < 8; ++k) {
        unsigned p = 2 + static_cast<unsigned>(k % 2), l = static_cast<unsigned>(k % 4);
        auto F = random_field(rng, 2, p);
        auto w = rng.homogeneous(2, l, 0.8);
        auto expect = PolyMap::identity(2);
        for (std::size_t j = 0; j < 2; ++j) expect.coords[j] += F.initial_part()[j].poly() * w;
        CHECK(shift_jet(F, w, p + l) == expect);
    }
}

TEST_CASE("time-c flow jets") {
    auto xf = MultiPoly::variable(1, 0, ScalarMode::floating);
    VectorFieldJet F(PolyMap({xf.pow(2)}));
    auto J = flow_time_jet(F, Scalar(0.5), 3);
    // x / (1 - x/2)
    CHECK(J.coords[0].coefficient(Monomial{1}).to_double() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(J.coords[0].coefficient(Monomial{2}).to_double() - 0.5) < 1e-9);
    CHECK(std::abs(J.coords[0].coefficient(Monomial{3}).to_double() - 0.25) < 1e-9);
    CHECK(flow_time_jet(F, Scalar(0.0), 3) == PolyMap::identity(1, ScalarMode::floating));
    CHECK_THROWS_AS(flow_time_jet(square_field(), Scalar(1), 3), Error);

    Eigen::Matrix2d L;
    L << 0.3, -1.1, 0.7, -0.2;
    auto x = MultiPoly::variable(2, 0, ScalarMode::floating), y = MultiPoly::variable(2, 1, ScalarMode::floating);
    VectorFieldJet G(PolyMap({x * Scalar(L(0, 0)) + y * Scalar(L(0, 1)), x * Scalar(L(1, 0)) + y * Scalar(L(1, 1))}));
    const double c = 0.8;
    Eigen::Matrix2d E = (L * c).exp();
    auto JG = flow_time_jet(G, Scalar(c), 3);
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
            CHECK(std::abs(JG.coords[static_cast<std::size_t>(r)].coefficient(Monomial::unit(2, static_cast<std::size_t>(s))).to_double() -
                           E(r, s)) < 1e-9);
}

TEST_CASE("float shift with constant time along a linear field") {
    Eigen::Matrix2d L;
    L << -4, 0, 0, 3;
    auto x = MultiPoly::variable(2, 0, ScalarMode::floating), y = MultiPoly::variable(2, 1, ScalarMode::floating);
    VectorFieldJet F(PolyMap({x * Scalar(-4.0), y * Scalar(3.0)}));
    auto h = shift_jet(F, MultiPoly::constant(2, Scalar(0.25)), 3);
    Eigen::Matrix2d E = (L * 0.25).exp();
    CHECK(std::abs(h.coords[0].coefficient(Monomial{1, 0}).to_double() - E(0, 0)) < 1e-7);
    CHECK(std::abs(h.coords[1].coefficient(Monomial{0, 1}).to_double() - E(1, 1)) < 1e-7);
}

TEST_CASE("jet inversion") {
    auto x = var(1, 0);
    // Reversion of x + x^2: coefficients are signed Catalan numbers.
    long catalan[] = {1, 1, 2, 5, 14};
    auto g = jet_inverse(PolyMap({x + x.pow(2)}), 5);
    MultiPoly expect(1);
    for (unsigned k = 1; k <= 5; ++k) expect += x.pow(k) * Scalar((k % 2 ? 1 : -1) * catalan[k - 1]);
    CHECK(g.coords[0] == expect);
    CHECK(jet_inverse(PolyMap::identity(2), 4) == PolyMap::identity(2));
    CHECK(jet_inverse(PolyMap({x * Scalar(2)}), 3).coords[0] == x * Scalar::rational(1, 2));
    CHECK_THROWS_AS(jet_inverse(PolyMap({var(2, 0), var(2, 0)}), 3), Error);

    Rng rng(8);
    for (int k = 0; k < 5; ++k) {
        auto h = PolyMap({var(2, 0) + rng.polynomial(2, 2, 3), var(2, 1) * Scalar(3) + rng.polynomial(2, 2, 3)});
        auto inv = jet_inverse(h, 5);
        CHECK(compose(h, inv, 5) == PolyMap::identity(2));
        CHECK(compose(inv, h, 5) == PolyMap::identity(2));
    }
}

}
