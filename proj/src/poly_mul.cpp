// Polynomial product kernels. mul_serial is the reference; mul_parallel must
// agree with it term for term (including float rounding), which is why output
// monomials are partitioned across threads by hash instead of splitting the
// input and summing partial products in a different order.

#include <unordered_map>

#ifdef JETFLOW_HAVE_OPENMP
#include <omp.h>
#endif

#include "jetflow/poly.hpp"

namespace jetflow {

namespace {

// Below this many term pairs the thread start-up dominates.
constexpr std::size_t kParallelThreshold = 1u << 14;

using Accumulator = std::unordered_map<Monomial, Scalar, MonomialHash>;

void check_operands(const MultiPoly& a, const MultiPoly& b) {
    if (a.nvars() != b.nvars())
        throw Error(ErrorKind::DimensionMismatch, "variable count mismatch in product (" +
                                                      std::to_string(a.nvars()) + " vs " +
                                                      std::to_string(b.nvars()) + ")");
    auto ma = a.mode(), mb = b.mode();
    if (ma && mb && *ma != *mb) throw Error(ErrorKind::ModeMismatch, "exact and float polynomials multiplied");
}

std::vector<Term> drain(Accumulator& acc) {
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [m, c] : acc) out.push_back({m, std::move(c)});
    return out;
}

} // namespace

MultiPoly mul_serial(const MultiPoly& a, const MultiPoly& b, std::optional<unsigned> max_degree) {
    check_operands(a, b);
    if (a.is_zero() || b.is_zero()) return MultiPoly(a.nvars());
    const unsigned cap = max_degree.value_or(~0u);
    Accumulator acc;
    for (const auto& ta : a.terms()) {
        if (ta.monomial.degree() > cap) break;
        for (const auto& tb : b.terms()) {
            if (ta.monomial.degree() + tb.monomial.degree() > cap) break;
            auto [it, inserted] = acc.try_emplace(ta.monomial * tb.monomial, Scalar::zero(ta.coef.mode()));
            it->second.add_product(ta.coef, tb.coef);
        }
    }
    return MultiPoly::from_terms(a.nvars(), drain(acc));
}

MultiPoly mul_parallel(const MultiPoly& a, const MultiPoly& b, std::optional<unsigned> max_degree) {
#ifndef JETFLOW_HAVE_OPENMP
    return mul_serial(a, b, max_degree);
#else
    check_operands(a, b);
    if (a.is_zero() || b.is_zero()) return MultiPoly(a.nvars());
    const unsigned cap = max_degree.value_or(~0u);
    std::vector<Accumulator> partial(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
    {
        const auto tid = static_cast<std::size_t>(omp_get_thread_num());
        const auto nthreads = static_cast<std::size_t>(omp_get_num_threads());
        Accumulator& acc = partial[tid];
        for (const auto& ta : a.terms()) {
            if (ta.monomial.degree() > cap) break;
            for (const auto& tb : b.terms()) {
                if (ta.monomial.degree() + tb.monomial.degree() > cap) break;
                Monomial m = ta.monomial * tb.monomial;
                if (m.hash() % nthreads != tid) continue;
                auto [it, inserted] = acc.try_emplace(std::move(m), Scalar::zero(ta.coef.mode()));
                it->second.add_product(ta.coef, tb.coef);
            }
        }
    }
    std::vector<Term> out;
    for (auto& acc : partial) {
        auto part = drain(acc);
        std::move(part.begin(), part.end(), std::back_inserter(out));
    }
    return MultiPoly::from_terms(a.nvars(), std::move(out));
#endif
}

MultiPoly mul_truncated(const MultiPoly& a, const MultiPoly& b, std::optional<unsigned> max_degree) {
#ifdef JETFLOW_HAVE_OPENMP
    if (a.size() * b.size() >= kParallelThreshold && omp_get_max_threads() > 1 && !omp_in_parallel())
        return mul_parallel(a, b, max_degree);
#endif
    return mul_serial(a, b, max_degree);
}

} // namespace jetflow
