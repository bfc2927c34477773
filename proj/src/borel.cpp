#include "jetflow/borel.hpp"

#include <cmath>

#include "jetflow/error.hpp"
#include "jetflow/linalg.hpp"

namespace jetflow {

namespace {

double edge(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }

struct FloatTerm {
    std::vector<unsigned> exps;
    double coef;
};

std::vector<FloatTerm> float_terms(const MultiPoly& p) {
    std::vector<FloatTerm> out;
    for (const auto& t : p.terms()) out.push_back({t.monomial.exponents(), t.coef.to_double()});
    return out;
}

double eval_terms(const std::vector<FloatTerm>& terms, std::span<const double> x) {
    double s = 0;
    for (const auto& t : terms) {
        double v = t.coef;
        for (std::size_t j = 0; j < t.exps.size(); ++j)
            for (unsigned e = 0; e < t.exps[j]; ++e) v *= x[j];
        s += v;
    }
    return s;
}

unsigned half_width(unsigned k) { return std::max(1u, (k + 1) / 2); }

} // namespace

double bump(double s) {
    const double a = std::abs(s);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    const double u = 2 * a - 1;  // 0 at the plateau edge, 1 at the support edge
    const double in = edge(1 - u), out = edge(u);
    return in / (in + out);
}

BorelRealization realize_jet(const std::vector<HomogPoly>& omegas) {
    if (omegas.empty()) throw Error(ErrorKind::InvalidArgument, "no jets to realize");
    const std::size_t n = omegas.front().nvars();
    BorelRealization r;
    r.omegas = omegas;
    std::vector<std::vector<FloatTerm>> terms;
    double factorial = 1;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const auto& w = omegas[i];
        if (w.nvars() != n) throw Error(ErrorKind::DimensionMismatch, "jets live in different dimensions");
        if (w.degree() != i) {
            throw Error(ErrorKind::InvalidArgument,
                        "jet " + std::to_string(i) + " has degree " + std::to_string(w.degree()));
        }
        if (i > 0) factorial *= static_cast<double>(i);
        double abs_sum = 0;
        for (const auto& t : w.poly().terms()) abs_sum += std::abs(t.coef.to_double());
        double radius = std::min(std::ldexp(1.0, -static_cast<int>(i)), 1.0 / (1.0 + abs_sum * factorial));
        if (i > 0) radius = std::min(radius, r.radii.back() / 2);
        r.radii.push_back(radius);
        terms.push_back(float_terms(w.poly()));
    }
    r.evaluator = [terms = std::move(terms), radii = r.radii](std::span<const double> x) {
        double norm2 = 0;
        for (double v : x) norm2 += v * v;
        const double norm = std::sqrt(norm2);
        double s = 0;
        for (std::size_t i = 0; i < radii.size(); ++i) {
            const double b = bump(norm / radii[i]);
            if (b != 0) s += b * eval_terms(terms[i], x);
        }
        return s;
    };
    return r;
}

std::vector<double> stencil_weights(unsigned k, unsigned m) {
    const std::size_t size = 2 * k + 1;
    if (m >= size) throw Error(ErrorKind::InvalidArgument, "derivative order exceeds stencil");
    Matrix V(size, size);
    for (std::size_t q = 0; q < size; ++q)
        for (std::size_t j = 0; j < size; ++j)
            V(q, j) = Scalar(static_cast<long>(j) - static_cast<long>(k)).pow(static_cast<unsigned>(q));
    std::vector<Scalar> rhs(size, Scalar(0));
    rhs[m] = Scalar(1);
    auto sol = solve(V, rhs);
    std::vector<double> w;
    for (const auto& c : sol.x) w.push_back(c.to_double());
    return w;
}

std::vector<TaylorEstimate> finite_diff_jet(const Evaluator& f, std::size_t nvars, unsigned k, double h,
                                            std::optional<double> plateau) {
    if (nvars != 1 && nvars != 2) throw Error(ErrorKind::InvalidArgument, "finite differences need n = 1 or 2");
    if (!(h > 0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
    const unsigned w = half_width(k);
    if (plateau) {
        const double reach = w * h * (nvars == 2 ? std::sqrt(2.0) : 1.0);
        if (reach > *plateau * (1 + 1e-12)) {
            throw Error(ErrorKind::StencilOutsidePlateau,
                        "stencil reaches " + std::to_string(reach) + " beyond plateau " + std::to_string(*plateau));
        }
    }
    const int kk = static_cast<int>(w);
    std::vector<std::vector<double>> weights;
    for (unsigned m = 0; m <= k; ++m) weights.push_back(stencil_weights(w, m));

    std::vector<TaylorEstimate> out;
    if (nvars == 1) {
        std::vector<double> samples;
        for (int j = -kk; j <= kk; ++j) {
            double x = j * h;
            samples.push_back(f(std::span<const double>(&x, 1)));
        }
        for (unsigned m = 0; m <= k; ++m) {
            double s = 0;
            for (std::size_t j = 0; j < samples.size(); ++j) s += weights[m][j] * samples[j];
            out.push_back({Monomial{m}, s / std::pow(h, m)});
        }
        return out;
    }
    const std::size_t size = 2 * w + 1;
    std::vector<double> grid(size * size);
    for (int i = -kk; i <= kk; ++i)
        for (int j = -kk; j <= kk; ++j) {
            double x[2] = {i * h, j * h};
            grid[(i + kk) * size + (j + kk)] = f(std::span<const double>(x, 2));
        }
    for (unsigned d = 0; d <= k; ++d)
        for (const auto& mono : monomials_of_degree(2, d)) {
            const auto& wa = weights[mono[0]];
            const auto& wb = weights[mono[1]];
            double s = 0;
            for (std::size_t i = 0; i < size; ++i)
                for (std::size_t j = 0; j < size; ++j) s += wa[i] * wb[j] * grid[i * size + j];
            out.push_back({mono, s / std::pow(h, d)});
        }
    return out;
}

std::vector<TaylorEstimate> finite_diff_jet(const BorelRealization& r, unsigned k, double h) {
    return finite_diff_jet(r.evaluator, r.nvars(), k, h, r.plateau());
}

double default_step(const BorelRealization& r, unsigned k) {
    const double reach = half_width(k) * (r.nvars() == 2 ? std::sqrt(2.0) : 1.0);
    return r.plateau() / reach;
}

} // namespace jetflow
