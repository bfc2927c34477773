#include "jetflow/recover.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace jetflow {

namespace {

struct System {
    Matrix A;
    std::vector<Scalar> b;
    std::vector<Monomial> unknowns;
};

// Coefficient equations of P_i * w = v_i over the monomials of degree p + l.
System build_system(const PolyMap& v, const std::vector<HomogPoly>& P, unsigned l, ScalarMode mode,
                    std::span<const std::size_t> coords) {
    const std::size_t n = v.nvars;
    unsigned p = 0;
    for (const auto& q : P)
        if (!q.is_zero()) p = q.degree();
    System s;
    s.unknowns = monomials_of_degree(n, l);
    const auto targets = monomials_of_degree(n, p + l);
    std::unordered_map<Monomial, std::size_t, MonomialHash> row_of;
    for (std::size_t r = 0; r < targets.size(); ++r) row_of.emplace(targets[r], r);

    s.A = Matrix(coords.size() * targets.size(), s.unknowns.size(), mode);
    s.b.assign(s.A.rows(), Scalar::zero(mode));
    for (std::size_t k = 0; k < coords.size(); ++k) {
        const std::size_t i = coords[k];
        const std::size_t base = k * targets.size();
        for (std::size_t u = 0; u < s.unknowns.size(); ++u)
            for (const auto& t : P[i].poly().terms())
                s.A(base + row_of.at(t.monomial * s.unknowns[u]), u) = t.coef;
        for (const auto& t : v.coords[i].terms()) s.b[base + row_of.at(t.monomial)] = t.coef;
    }
    return s;
}

MultiPoly assemble(const std::vector<Monomial>& unknowns, const std::vector<Scalar>& x, std::size_t n) {
    std::vector<Term> terms;
    for (std::size_t u = 0; u < unknowns.size(); ++u) terms.push_back({unknowns[u], x[u]});
    return MultiPoly::from_terms(n, std::move(terms));
}

std::string describe_residual(const PolyMap& v, const std::vector<HomogPoly>& P, const MultiPoly& w) {
    std::vector<MultiPoly> r;
    for (std::size_t i = 0; i < v.ncoords(); ++i) r.push_back(v.coords[i] - P[i].poly() * w);
    return "residual " + to_string(PolyMap(std::move(r)));
}

std::vector<Scalar> float_least_squares(const System& s, double& worst) {
    Eigen::MatrixXd M(s.A.rows(), s.A.cols());
    Eigen::VectorXd b(s.A.rows());
    for (std::size_t r = 0; r < s.A.rows(); ++r) {
        b(static_cast<Eigen::Index>(r)) = s.b[r].to_double();
        for (std::size_t c = 0; c < s.A.cols(); ++c)
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s.A(r, c).to_double();
    }
    Eigen::VectorXd x = M.colPivHouseholderQr().solve(b);
    worst = (M * x - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
    std::vector<Scalar> out;
    for (Eigen::Index i = 0; i < x.size(); ++i) out.emplace_back(x(i));
    return out;
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).to_double();
    return e;
}

PolyMap homogeneous_slice(const PolyMap& h, unsigned d) {
    std::vector<MultiPoly> out;
    for (const auto& c : h.coords) out.push_back(homogeneous_part(c, d).poly());
    return PolyMap(std::move(out));
}

bool below(const PolyMap& a, double tol) {
    for (const auto& c : a.coords)
        for (const auto& t : c.terms())
            if (t.coef.is_exact() || std::abs(t.coef.to_double()) > tol) return false;
    return true;
}

MultiPoly sum_of(const std::vector<HomogPoly>& omegas, std::size_t n) {
    MultiPoly s(n);
    for (const auto& w : omegas) s += w.poly();
    return s;
}

} // namespace

double max_coefficient_gap(const PolyMap& a, const PolyMap& b) {
    double worst = 0;
    const PolyMap d = a - b;
    for (const auto& c : d.coords)
        for (const auto& t : c.terms()) worst = std::max(worst, std::abs(t.coef.to_double()));
    return worst;
}

HomogPoly divide_by_initial_part(const PolyMap& v, const std::vector<HomogPoly>& P, unsigned l,
                                 const RecoverOptions& opts) {
    const std::size_t n = v.nvars;
    if (P.size() != v.ncoords() || P.empty()) throw Error(ErrorKind::DimensionMismatch, "initial part size mismatch");
    const bool nonzero = std::any_of(P.begin(), P.end(), [](const HomogPoly& q) { return !q.is_zero(); });
    if (!nonzero) throw Error(ErrorKind::InvalidArgument, "initial part is zero");
    const unsigned p = std::find_if(P.begin(), P.end(), [](const HomogPoly& q) { return !q.is_zero(); })->degree();
    for (const auto& q : P)
        if (!q.is_zero() && q.degree() != p) throw Error(ErrorKind::InvalidArgument, "initial part has mixed degrees");
    for (const auto& c : v.coords)
        for (const auto& t : c.terms())
            if (t.monomial.degree() != p + l)
                throw Error(ErrorKind::InvalidArgument, "right-hand side is not homogeneous of degree " +
                                                            std::to_string(p + l));
    const ScalarMode mode = v.mode().value_or(P.front().poly().mode().value_or(ScalarMode::exact));
    if (v.mode() == std::nullopt) return HomogPoly(MultiPoly(n), l);

    std::vector<std::size_t> all(v.ncoords());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const System s = build_system(v, P, l, mode, all);

    if (mode == ScalarMode::floating) {
        double worst = 0;
        auto x = float_least_squares(s, worst);
        MultiPoly w = drop_small(assemble(s.unknowns, x, n), opts.shift.drop_tol);
        if (worst > opts.consistency_tol)
            throw Error(ErrorKind::Inconsistent, "degree " + std::to_string(p + l) + " part is not P*w; " +
                                                     describe_residual(v, P, w), l);
        return HomogPoly(w, l);
    }

    auto sol = solve(s.A, s.b);
    if (sol.status == SolveStatus::unique) return HomogPoly(assemble(s.unknowns, sol.x, n), l);
    if (sol.status == SolveStatus::underdetermined)
        throw Error(ErrorKind::InvalidArgument, "division by the initial part is not unique");

    // Best effort residual: the solution forced by the first usable coordinate.
    MultiPoly w(n);
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (P[i].is_zero()) continue;
        std::size_t one[] = {i};
        const System si = build_system(v, P, l, mode, one);
        auto part = solve(si.A, si.b);
        if (part.status == SolveStatus::unique) w = assemble(si.unknowns, part.x, n);
        break;
    }
    throw Error(ErrorKind::Inconsistent,
                "degree " + std::to_string(p + l) + " part is not P*w; " + describe_residual(v, P, w), l);
}

Scalar delta0_linear(const Matrix& A_in, const Matrix& L_in, double tol, double window) {
    if (!A_in.is_square() || !L_in.is_square() || A_in.rows() != L_in.rows())
        throw Error(ErrorKind::DimensionMismatch, "delta0 needs square matrices of equal size");
    if (L_in.is_zero()) throw Error(ErrorKind::InvalidArgument, "generator is zero");
    const Eigen::MatrixXd A = to_eigen(A_in), L = to_eigen(L_in);

    auto f = [&](double t) { return ((L * t).exp() - A).squaredNorm(); };
    auto df = [&](double t, double& d1, double& d2) {
        Eigen::MatrixXd E = (L * t).exp(), R = E - A, LE = L * E;
        d1 = 2 * (LE.cwiseProduct(R)).sum();
        d2 = 2 * (LE.squaredNorm() + (L * LE).cwiseProduct(R).sum());
    };

    // Scan with a step resolving the fastest rotation or growth of e^{Lt}.
    const double norm = L.cwiseAbs().rowwise().sum().maxCoeff();
    const double h = std::min(0.01, 0.1 / norm);
    const auto m = static_cast<long>(std::ceil(window / h));
    const Eigen::MatrixXd step = (L * h).exp(), back = (L * -h).exp();
    std::vector<double> vals(static_cast<std::size_t>(2 * m + 1));
    Eigen::MatrixXd E = Eigen::MatrixXd::Identity(L.rows(), L.cols());
    for (long k = 0; k <= m; ++k) {
        vals[static_cast<std::size_t>(m + k)] = (E - A).squaredNorm();
        E = E * step;
    }
    E = back;
    for (long k = 1; k <= m; ++k) {
        vals[static_cast<std::size_t>(m - k)] = (E - A).squaredNorm();
        E = E * back;
    }

    std::vector<double> candidates;
    for (long k = -m; k <= m; ++k) {
        const double here = vals[static_cast<std::size_t>(m + k)];
        if (!std::isfinite(here)) continue;
        const double left = k > -m ? vals[static_cast<std::size_t>(m + k - 1)] : INFINITY;
        const double right = k < m ? vals[static_cast<std::size_t>(m + k + 1)] : INFINITY;
        if (here <= left && here <= right) candidates.push_back(static_cast<double>(k) * h);
    }
    std::sort(candidates.begin(), candidates.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b) || (std::abs(a) == std::abs(b) && a < b);
    });

    for (double t0 : candidates) {
        // Golden section on the bracketing cell, then Newton on f'.
        double a = t0 - h, b = t0 + h;
        const double g = (std::sqrt(5.0) - 1) / 2;
        double c = b - g * (b - a), d = a + g * (b - a), fc = f(c), fd = f(d);
        for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
            if (fc < fd) {
                b = d, d = c, fd = fc, c = b - g * (b - a), fc = f(c);
            } else {
                a = c, c = d, fc = fd, d = a + g * (b - a), fd = f(d);
            }
        }
        double t = (a + b) / 2;
        for (int it = 0; it < 20; ++it) {
            double d1, d2;
            df(t, d1, d2);
            if (!(d2 > 0)) break;
            const double next = t - d1 / d2;
            if (!std::isfinite(next) || std::abs(next - t0) > 2 * h) break;
            const bool done = std::abs(next - t) < 1e-15 * std::max(1.0, std::abs(t));
            t = next;
            if (done) break;
        }
        if (std::sqrt(f(t)) <= tol) return Scalar(t);
    }
    throw Error(ErrorKind::NotOnSubgroup,
                "no t with |t| <= " + std::to_string(window) + " gives e^{Lt} within " + std::to_string(tol));
}

RecoveryResult recover_shift_jet(const VectorFieldJet& F, const PolyMap& h_in, unsigned K,
                                 const RecoverOptions& opts) {
    const std::size_t n = F.nvars();
    const unsigned p = F.flat_order();
    if (K < p) throw Error(ErrorKind::InvalidArgument, "order K must be at least the flat order p");
    if (h_in.nvars != n || h_in.ncoords() != n) throw Error(ErrorKind::DimensionMismatch, "map and field dimensions differ");
    if (!h_in.has_zero_constant_terms()) throw Error(ErrorKind::InvalidArgument, "map must vanish at the origin");
    if (h_in.mode() && *h_in.mode() != F.mode())
        throw Error(ErrorKind::ModeMismatch, "map and field use different scalar modes");
    const ScalarMode mode = F.mode();
    const bool flt = mode == ScalarMode::floating;
    const PolyMap id = PolyMap::identity(n, mode);

    RecoveryResult res;
    res.mode = mode;
    PolyMap h = truncate(h_in, K, opts.shift.drop_tol);
    if (opts.keep_stages) res.stages.push_back(h);

    for (unsigned l = 0; l + p <= K; ++l) {
        // Below degree p + l the current map must already agree with the identity.
        const unsigned settled = p + l - 1;
        if (settled >= 1 && !(p == 1 && l == 0)) {
            const PolyMap gap = truncate(h, settled, 0.0) - id;
            const bool ok = flt ? below(gap, opts.consistency_tol) : gap == PolyMap::zero(n, n);
            if (!ok)
                throw Error(ErrorKind::Inconsistent,
                            "jet of order " + std::to_string(settled) + " differs from the identity: (" +
                                to_string(gap) + ")",
                            l);
        }

        HomogPoly w;
        if (p == 1 && l == 0) {
            const Matrix A = linear_matrix(truncate(h, 1, 0.0));
            if (flt) {
                const Scalar t = delta0_linear(A, *F.linear_part(), opts.delta0_tol, opts.delta0_window);
                w = HomogPoly(MultiPoly::constant(n, t), 0);
            } else {
                if (!(A == Matrix::identity(n)))
                    throw Error(ErrorKind::InvalidArgument,
                                "exact recovery along a field with nonzero linear part needs j^1(h) = id", 0u);
                w = HomogPoly(MultiPoly(n), 0);
            }
        } else {
            w = divide_by_initial_part(homogeneous_slice(h - id, p + l), F.initial_part(), l, opts);
        }
        res.omegas.push_back(w);
        if (!w.is_zero()) h = hatted_shift_jet(F, h, -w.poly(), K, opts.shift);
        if (opts.keep_stages) res.stages.push_back(h);
    }
    res.residual_ok = verify_residual(F, h_in, res.omegas, K, opts);
    return res;
}

bool verify_residual(const VectorFieldJet& F, const PolyMap& h, const std::vector<HomogPoly>& omegas, unsigned K,
                     const RecoverOptions& opts) {
    const std::size_t n = F.nvars();
    const PolyMap id = truncate(PolyMap::identity(n, F.mode()), K);
    const MultiPoly sigma = sum_of(omegas, n);
    PolyMap back;
    try {
        back = sigma.is_zero() ? truncate(h, K, opts.shift.drop_tol)
                               : hatted_shift_jet(F, h, -sigma, K, opts.shift);
    } catch (const Error&) {
        return false;
    }
    if (F.mode() == ScalarMode::exact) return truncate(back, K) == id;
    return max_coefficient_gap(truncate(back, K, 0.0), id) <= opts.residual_tol;
}

std::vector<BatchOutcome> recover_batch_serial(const VectorFieldJet& F, std::span<const PolyMap> maps, unsigned K,
                                               const RecoverOptions& opts) {
    std::vector<BatchOutcome> out(maps.size());
    for (std::size_t i = 0; i < maps.size(); ++i) {
        try {
            out[i].result = recover_shift_jet(F, maps[i], K, opts);
        } catch (const Error& e) {
            out[i].error = e;
        }
    }
    return out;
}

std::vector<BatchOutcome> recover_batch(const VectorFieldJet& F, std::span<const PolyMap> maps, unsigned K,
                                        const RecoverOptions& opts) {
    std::vector<BatchOutcome> out(maps.size());
    const auto count = static_cast<long>(maps.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k].result = recover_shift_jet(F, maps[k], K, opts);
        } catch (const Error& e) {
            out[k].error = e;
        }
    }
    return out;
}

} // namespace jetflow
