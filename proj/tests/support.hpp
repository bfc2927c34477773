#pragma once

#include <random>
#include <vector>

#include "jetflow/poly.hpp"

namespace testing {

using namespace jetflow;

struct T {
    std::vector<unsigned> exps;
    long num;
    long den = 1;
};

inline MultiPoly poly(std::size_t n, std::initializer_list<T> terms) {
    std::vector<Term> v;
    for (const auto& t : terms) v.push_back({Monomial(std::span<const unsigned>(t.exps)), Scalar::rational(t.num, t.den)});
    return MultiPoly::from_terms(n, std::move(v));
}

inline MultiPoly var(std::size_t n, std::size_t i) { return MultiPoly::variable(n, i); }
inline MultiPoly cst(std::size_t n, long num, long den = 1) {
    return MultiPoly::constant(n, Scalar::rational(num, den));
}

inline PolyMap map(std::vector<MultiPoly> coords) { return PolyMap(std::move(coords)); }

// All exponent vectors of total degree d in n variables.
inline std::vector<std::vector<unsigned>> exponent_vectors(std::size_t n, unsigned d) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> e(n, 0);
    auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
        if (i + 1 == n) {
            e[i] = left;
            out.push_back(e);
            return;
        }
        for (unsigned k = 0; k <= left; ++k) {
            e[i] = k;
            self(self, i + 1, left - k);
        }
    };
    rec(rec, 0, d);
    return out;
}

class Rng {
public:
    explicit Rng(unsigned seed) : gen_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }

    Scalar rational(long bound = 5, long maxden = 4) {
        long den = integer(1, maxden);
        return Scalar::rational(integer(-bound * den, bound * den), den);
    }

    // Random homogeneous polynomial of degree d; each monomial present with probability density.
    MultiPoly homogeneous(std::size_t n, unsigned d, double density = 0.6, long bound = 5) {
        std::vector<Term> terms;
        for (const auto& e : exponent_vectors(n, d))
            if (coin(density)) terms.push_back({Monomial(std::span<const unsigned>(e)), rational(bound)});
        return MultiPoly::from_terms(n, std::move(terms));
    }

    MultiPoly polynomial(std::size_t n, unsigned lo, unsigned hi, double density = 0.5, long bound = 5) {
        MultiPoly p(n);
        for (unsigned d = lo; d <= hi; ++d) p += homogeneous(n, d, density, bound);
        return p;
    }

    std::mt19937& engine() { return gen_; }

private:
    std::mt19937 gen_;
};

} // namespace testing
