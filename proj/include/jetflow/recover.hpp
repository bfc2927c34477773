#pragma once

#include <optional>
#include <span>
#include <vector>

#include "jetflow/jet.hpp"
#include "jetflow/linalg.hpp"

namespace jetflow {

struct RecoverOptions {
    double residual_tol = 1e-8;     // float residual, coefficientwise
    double delta0_tol = 1e-9;       // ||e^{Lt} - A||_F
    double delta0_window = 100.0;   // search |t| <= window
    double consistency_tol = 1e-6;  // float least-squares residual in divide_by_initial_part
    bool keep_stages = false;       // record h_0, h_1, ... in the result
    ShiftOptions shift;
};

struct RecoveryResult {
    std::vector<HomogPoly> omegas;   // omegas[l] has degree l
    bool residual_ok = false;
    ScalarMode mode = ScalarMode::exact;
    std::vector<PolyMap> stages;     // filled when RecoverOptions::keep_stages
};

// The unique homogeneous w of degree l with P_i * w = v_i for every i.
// v must be homogeneous of degree p + l. Throws Inconsistent (carrying l) when
// no such w exists.
HomogPoly divide_by_initial_part(const PolyMap& v, const std::vector<HomogPoly>& P, unsigned l,
                                 const RecoverOptions& opts = {});

// t with ||e^{Lt} - A||_F <= tol, smallest |t| among the local minimizers found
// by a scan of [-window, window]. Float mode. Throws NotOnSubgroup.
Scalar delta0_linear(const Matrix& A, const Matrix& L, double tol = 1e-9, double window = 100.0);

// Recovers w_0 .. w_{K-p} with j^K(Phi(h(x), -sum w_l(x))) = j^K(id).
RecoveryResult recover_shift_jet(const VectorFieldJet& F, const PolyMap& h, unsigned K,
                                 const RecoverOptions& opts = {});

bool verify_residual(const VectorFieldJet& F, const PolyMap& h, const std::vector<HomogPoly>& omegas, unsigned K,
                     const RecoverOptions& opts = {});

struct BatchOutcome {
    std::optional<RecoveryResult> result;
    std::optional<Error> error;
};

// Independent recoveries; runs in parallel when OpenMP is available. Output order follows input.
std::vector<BatchOutcome> recover_batch(const VectorFieldJet& F, std::span<const PolyMap> maps, unsigned K,
                                        const RecoverOptions& opts = {});
std::vector<BatchOutcome> recover_batch_serial(const VectorFieldJet& F, std::span<const PolyMap> maps, unsigned K,
                                               const RecoverOptions& opts = {});

// Largest coefficient magnitude of a - b (converted to double).
double max_coefficient_gap(const PolyMap& a, const PolyMap& b);

} // namespace jetflow
