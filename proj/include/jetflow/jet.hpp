#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "jetflow/linalg.hpp"
#include "jetflow/poly.hpp"

namespace jetflow {

// Polynomial vector field jet F with F(0) = 0, its flat order p (first degree
// with a nonzero homogeneous part) and initial part P = j^p(F). For p = 1 the
// linear part is also kept as a matrix L with P(x) = Lx.
class VectorFieldJet {
public:
    explicit VectorFieldJet(PolyMap field);

    const PolyMap& field() const noexcept { return field_; }
    std::size_t nvars() const noexcept { return field_.nvars; }
    unsigned flat_order() const noexcept { return p_; }
    const std::vector<HomogPoly>& initial_part() const noexcept { return initial_; }
    PolyMap initial_map() const;
    const std::optional<Matrix>& linear_part() const noexcept { return linear_; }
    ScalarMode mode() const noexcept { return mode_; }

    // v_1 .. v_N truncated at K. Results are memoized per K and shared by copies.
    std::vector<PolyMap> flow_coefficients(unsigned N, unsigned K) const;

private:
    struct Cache {
        std::mutex mutex;
        std::map<unsigned, std::vector<PolyMap>> by_order;
    };

    PolyMap field_;
    unsigned p_ = 0;
    std::vector<HomogPoly> initial_;
    std::optional<Matrix> linear_;
    ScalarMode mode_ = ScalarMode::exact;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

struct FlowJet {
    unsigned order = 0;       // N
    unsigned x_order = 0;     // K
    std::vector<PolyMap> coeffs;   // coeffs[i - 1] = v_i
};

// v_1 = F, v_{i+1} = j^K(grad v_i . F).
FlowJet flow_taylor_coeffs(const VectorFieldJet& F, unsigned N, unsigned K);

// T(x, t) = x + sum_{i<=N} v_i(x) t^i / i! as a map in n + 1 variables, with t last.
PolyMap flow_bijet(const VectorFieldJet& F, unsigned N, unsigned K);

struct ShiftOptions {
    // flow_time_jet takes ceil(|c| * rate / max_step) RK4 steps, where rate is
    // max(1, ||L||_inf) for the field's linear part L.
    double max_step = 0.01;
    double drop_tol = kDefaultDropTolerance;
};

// j^K(x -> Phi(x, alpha(x))). For p = 1 a nonzero alpha(0) needs float mode.
PolyMap shift_jet(const VectorFieldJet& F, const MultiPoly& alpha, unsigned K, const ShiftOptions& opts = {});

// j^K(x -> Phi(h(x), beta(x))) for h(0) = 0. beta(0) != 0 is accepted when
// p >= 2, and for p = 1 in float mode (through flow_time_jet).
PolyMap hatted_shift_jet(const VectorFieldJet& F, const PolyMap& h, const MultiPoly& beta, unsigned K,
                         const ShiftOptions& opts = {});

// j^K(Phi_c) by RK4 on dJ/dt = j^K(F o J), J(0) = id. Float mode only.
PolyMap flow_time_jet(const VectorFieldJet& F, const Scalar& c, unsigned K, const ShiftOptions& opts = {});

// g with j^K(h o g) = j^K(id); h(0) = 0 and an invertible linear part.
PolyMap jet_inverse(const PolyMap& h, unsigned K);

// Linear part of a map as a matrix (row i = coefficients of x_j in coordinate i).
Matrix linear_matrix(const PolyMap& h);
// x -> A x as a polynomial map.
PolyMap linear_map(const Matrix& A);

} // namespace jetflow
