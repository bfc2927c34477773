#include "jetflow/jet.hpp"

#include <cmath>

namespace jetflow {

namespace {

// grad(v) . F for every coordinate of v, truncated at K.
PolyMap lie_derivative(const PolyMap& v, const PolyMap& F, unsigned K) {
    std::vector<MultiPoly> out;
    out.reserve(v.ncoords());
    for (const auto& vi : v.coords) {
        MultiPoly acc(v.nvars);
        for (std::size_t j = 0; j < v.nvars; ++j) {
            auto d = partial_derivative(vi, j);
            if (d.is_zero() || F.coords[j].is_zero()) continue;
            acc += mul_truncated(d, F.coords[j], K);
        }
        out.push_back(std::move(acc));
    }
    return truncate(PolyMap(std::move(out)), K);
}

// Same polynomial viewed in more variables (new ones appended, exponent 0).
MultiPoly widen(const MultiPoly& f, std::size_t nvars) {
    std::vector<Term> terms;
    for (const auto& t : f.terms()) {
        Monomial m(nvars);
        for (std::size_t i = 0; i < t.monomial.size(); ++i) m.set(i, t.monomial[i]);
        terms.push_back({m, t.coef});
    }
    return MultiPoly::from_terms(nvars, std::move(terms));
}

void require_vanishing(const PolyMap& h, const char* what) {
    if (!h.has_zero_constant_terms())
        throw Error(ErrorKind::InvalidArgument, std::string(what) + " must vanish at the origin");
}

void check_mode(const VectorFieldJet& F, const std::optional<ScalarMode>& m) {
    if (m && *m != F.mode()) throw Error(ErrorKind::ModeMismatch, "field and argument use different scalar modes");
}

} // namespace

VectorFieldJet::VectorFieldJet(PolyMap field) : field_(std::move(field)) {
    if (field_.ncoords() != field_.nvars)
        throw Error(ErrorKind::DimensionMismatch, "vector field has " + std::to_string(field_.ncoords()) +
                                                      " coordinates in " + std::to_string(field_.nvars) +
                                                      " variables");
    if (!field_.has_zero_constant_terms())
        throw Error(ErrorKind::InvalidArgument, "vector field must vanish at the origin");
    std::optional<unsigned> p;
    for (const auto& c : field_.coords) {
        auto d = min_degree(c);
        if (d && (!p || *d < *p)) p = d;
    }
    if (!p) throw Error(ErrorKind::InvalidArgument, "vector field is flat up to its truncation order");
    p_ = *p;
    mode_ = *field_.mode();
    for (const auto& c : field_.coords) initial_.push_back(homogeneous_part(c, p_));
    if (p_ == 1) linear_ = linear_matrix(initial_map());
}

PolyMap VectorFieldJet::initial_map() const {
    std::vector<MultiPoly> c;
    for (const auto& h : initial_) c.push_back(h.poly());
    return PolyMap(std::move(c));
}

std::vector<PolyMap> VectorFieldJet::flow_coefficients(unsigned N, unsigned K) const {
    std::lock_guard lock(cache_->mutex);
    auto& v = cache_->by_order[K];
    if (v.empty()) v.push_back(truncate(field_, K));
    while (v.size() < N) v.push_back(lie_derivative(v.back(), field_, K));
    return {v.begin(), v.begin() + N};
}

FlowJet flow_taylor_coeffs(const VectorFieldJet& F, unsigned N, unsigned K) {
    if (N < 1 || K < 1) throw Error(ErrorKind::InvalidArgument, "flow jet orders must be positive");
    return {N, K, F.flow_coefficients(N, K)};
}

PolyMap flow_bijet(const VectorFieldJet& F, unsigned N, unsigned K) {
    const auto flow = flow_taylor_coeffs(F, N, K);
    const std::size_t n = F.nvars();
    auto t = MultiPoly::variable(n + 1, n, F.mode());
    std::vector<MultiPoly> out;
    for (std::size_t j = 0; j < n; ++j) out.push_back(MultiPoly::variable(n + 1, j, F.mode()));
    MultiPoly tpow = MultiPoly::constant(n + 1, Scalar::one(F.mode()));
    for (unsigned i = 1; i <= N; ++i) {
        tpow = tpow * t * (Scalar::one(F.mode()) / Scalar::from_integer(i, F.mode()));
        for (std::size_t j = 0; j < n; ++j) out[j] += widen(flow.coeffs[i - 1].coords[j], n + 1) * tpow;
    }
    return PolyMap(std::move(out));
}

PolyMap hatted_shift_jet(const VectorFieldJet& F, const PolyMap& h, const MultiPoly& beta, unsigned K,
                         const ShiftOptions& opts) {
    const std::size_t n = F.nvars();
    if (h.nvars != n || h.ncoords() != n || beta.nvars() != n)
        throw Error(ErrorKind::DimensionMismatch, "map, time function and field dimensions differ");
    require_vanishing(h, "the base map");
    check_mode(F, h.mode());
    check_mode(F, beta.mode());
    const ScalarMode mode = F.mode();
    const unsigned p = F.flat_order();

    Scalar c = beta.constant_term();
    if (!c.is_zero() && p == 1) {
        if (mode == ScalarMode::exact)
            throw Error(ErrorKind::InvalidArgument,
                        "a shift with nonzero constant time along a field with nonzero linear part needs float mode");
        // Phi(h, beta) = Phi(Phi_c o h, beta - c)
        auto moved = compose(flow_time_jet(F, c, K, opts), h, K);
        return hatted_shift_jet(F, moved, beta - MultiPoly::constant(n, c), K, opts);
    }

    const unsigned ordb = min_degree(beta).value_or(K + 1);
    auto base = truncate(h, K, opts.drop_tol);
    if (ordb > K) return base;

    // Term i survives truncation only if i(p - 1) + i ord(beta) <= K.
    const unsigned step = (p - 1) + ordb;
    const unsigned imax = step == 0 ? 0 : K / step;
    if (imax == 0) return base;
    const auto v = F.flow_coefficients(imax, K);

    Substitution sub(base, K);
    std::vector<MultiPoly> out = base.coords;
    MultiPoly bpow = MultiPoly::constant(n, Scalar::one(mode));
    for (unsigned i = 1; i <= imax; ++i) {
        bpow = truncate(mul_truncated(bpow, beta, K), K, 0.0) * (Scalar::one(mode) / Scalar::from_integer(i, mode));
        const unsigned room = K - i * ordb;   // degree budget left for v_i o h
        for (std::size_t j = 0; j < n; ++j) {
            auto vh = sub.apply(v[i - 1].coords[j], room);
            if (vh.is_zero()) continue;
            out[j] += mul_truncated(vh, bpow, K);
        }
    }
    return truncate(PolyMap(std::move(out)), K, opts.drop_tol);
}

PolyMap shift_jet(const VectorFieldJet& F, const MultiPoly& alpha, unsigned K, const ShiftOptions& opts) {
    return hatted_shift_jet(F, PolyMap::identity(F.nvars(), F.mode()), alpha, K, opts);
}

PolyMap flow_time_jet(const VectorFieldJet& F, const Scalar& c, unsigned K, const ShiftOptions& opts) {
    if (F.mode() != ScalarMode::floating || c.mode() != ScalarMode::floating)
        throw Error(ErrorKind::ModeMismatch, "the time-c flow jet is computed in float mode only");
    const std::size_t n = F.nvars();
    PolyMap J = PolyMap::identity(n, ScalarMode::floating, K);
    const double T = c.to_double();
    if (T == 0) return J;
    double rate = 1.0;
    if (const auto& L = F.linear_part())
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0;
            for (std::size_t j = 0; j < n; ++j) row += std::abs((*L)(i, j).to_double());
            rate = std::max(rate, row);
        }
    const auto steps = std::max(1u, static_cast<unsigned>(std::ceil(std::abs(T) * rate / opts.max_step)));
    const Scalar dt(T / steps), half(T / steps / 2), sixth(T / steps / 6);
    const PolyMap field = truncate(F.field(), K, 0.0);

    auto rhs = [&](const PolyMap& X) { return compose(field, X, K); };
    auto axpy = [&](const PolyMap& X, const PolyMap& Y, const Scalar& a) {
        std::vector<MultiPoly> out;
        for (std::size_t j = 0; j < n; ++j) out.push_back(X.coords[j] + Y.coords[j] * a);
        return PolyMap(std::move(out), K);
    };

    for (unsigned s = 0; s < steps; ++s) {
        auto k1 = rhs(J);
        auto k2 = rhs(axpy(J, k1, half));
        auto k3 = rhs(axpy(J, k2, half));
        auto k4 = rhs(axpy(J, k3, dt));
        std::vector<MultiPoly> next;
        for (std::size_t j = 0; j < n; ++j) {
            MultiPoly inc = k1.coords[j] + k2.coords[j] * Scalar(2.0) + k3.coords[j] * Scalar(2.0) + k4.coords[j];
            next.push_back(J.coords[j] + inc * sixth);
        }
        J = PolyMap(std::move(next), K);
        for (const auto& coord : J.coords)
            for (const auto& t : coord.terms())
                if (!std::isfinite(t.coef.to_double()))
                    throw Error(ErrorKind::NonFinite, "flow jet blew up before time " + c.str());
    }
    return truncate(J, K, opts.drop_tol);
}

Matrix linear_matrix(const PolyMap& h) {
    const ScalarMode mode = h.mode().value_or(ScalarMode::exact);
    Matrix A(h.ncoords(), h.nvars, mode);
    for (std::size_t i = 0; i < h.ncoords(); ++i)
        for (std::size_t j = 0; j < h.nvars; ++j) A(i, j) = h.coords[i].coefficient(Monomial::unit(h.nvars, j));
    return A;
}

PolyMap linear_map(const Matrix& A) {
    std::vector<MultiPoly> out;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        std::vector<Term> terms;
        for (std::size_t j = 0; j < A.cols(); ++j) terms.push_back({Monomial::unit(A.cols(), j), A(i, j)});
        out.push_back(MultiPoly::from_terms(A.cols(), std::move(terms)));
    }
    return PolyMap(std::move(out));
}

PolyMap jet_inverse(const PolyMap& h, unsigned K) {
    if (h.ncoords() != h.nvars) throw Error(ErrorKind::DimensionMismatch, "only square maps can be inverted");
    require_vanishing(h, "the map to invert");
    const ScalarMode mode = h.mode().value_or(ScalarMode::exact);
    const std::size_t n = h.nvars;
    const Matrix A = linear_matrix(h);
    if (determinant(A).is_zero()) throw Error(ErrorKind::InvalidArgument, "linear part is singular");
    const Matrix Ainv = inverse(A);
    PolyMap g = truncate(linear_map(Ainv), K);
    const PolyMap id = PolyMap::identity(n, mode);
    for (unsigned k = 2; k <= K; ++k) {
        auto err = compose(h, g, k) - id;
        std::vector<MultiPoly> corr(n, MultiPoly(n));
        for (std::size_t i = 0; i < n; ++i) {
            auto ek = homogeneous_part(err.coords[i], k).poly();
            if (ek.is_zero()) continue;
            for (std::size_t r = 0; r < n; ++r)
                if (!Ainv(r, i).is_zero()) corr[r] += ek * Ainv(r, i);
        }
        g = truncate(g - PolyMap(std::move(corr)), K);
    }
    return g;
}

} // namespace jetflow
