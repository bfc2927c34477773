// Serial reference kernels against their OpenMP counterparts.
//   bench_kernels [repetitions]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#ifdef JETFLOW_HAVE_OPENMP
#include <omp.h>
#endif

#include "jetflow/jet.hpp"
#include "jetflow/recover.hpp"

using namespace jetflow;

namespace {

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

MultiPoly dense(std::mt19937& gen, std::size_t n, unsigned degree) {
    std::uniform_int_distribution<long> num(-50, 50), den(1, 9);
    std::vector<Term> terms;
    for (unsigned d = 0; d <= degree; ++d)
        for (const auto& m : monomials_of_degree(n, d)) terms.push_back({m, Scalar::rational(num(gen), den(gen))});
    return MultiPoly::from_terms(n, std::move(terms));
}

void row(const char* name, double serial, double parallel, bool same) {
    std::printf("%-34s %10.4f %10.4f %7.2fx  %s\n", name, serial, parallel, serial / parallel,
                same ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
    int threads = 1;
#ifdef JETFLOW_HAVE_OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("threads: %d, best of %d\n", threads, reps);
    std::printf("%-34s %10s %10s %8s\n", "kernel", "serial s", "parallel s", "speedup");

    std::mt19937 gen(7);
    for (auto [n, d] : {std::pair<std::size_t, unsigned>{2, 30}, {3, 14}, {4, 9}}) {
        auto a = dense(gen, n, d), b = dense(gen, n, d);
        MultiPoly s, p;
        const double ts = best_of(reps, [&] { s = mul_serial(a, b); });
        const double tp = best_of(reps, [&] { p = mul_parallel(a, b); });
        char name[64];
        std::snprintf(name, sizeof name, "multiply n=%zu deg=%u (%zu terms)", n, d, a.size());
        row(name, ts, tp, s == p);
    }

    // Batch recovery along the reduced Hamiltonian field of (x^2+y^2)(x^2+2y^2).
    auto x = MultiPoly::variable(2, 0), y = MultiPoly::variable(2, 1);
    VectorFieldJet F(PolyMap({x.pow(2) * y * Scalar(-3) - y.pow(3) * Scalar(4),
                              x.pow(3) * Scalar(2) + x * y.pow(2) * Scalar(3)}));
    std::vector<PolyMap> maps;
    for (int k = 0; k < 16; ++k) maps.push_back(shift_jet(F, dense(gen, 2, 4), 10));
    std::vector<BatchOutcome> s, p;
    const double ts = best_of(reps, [&] { s = recover_batch_serial(F, maps, 10); });
    const double tp = best_of(reps, [&] { p = recover_batch(F, maps, 10); });
    bool same = s.size() == p.size();
    for (std::size_t i = 0; same && i < s.size(); ++i)
        same = s[i].result && p[i].result && s[i].result->omegas == p[i].result->omegas;
    row("recover batch (16 maps, K=10)", ts, tp, same);
    return 0;
}
