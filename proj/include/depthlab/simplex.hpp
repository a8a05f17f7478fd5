#pragma once

#include <span>

#include "depthlab/core.hpp"

namespace depthlab {

/// Phase-1 simplex feasibility for { lambda >= 0 : A lambda = b } with
/// Bland's rule (anti-cycling) and row/column equilibration.
///
/// On infeasibility, dual is a certificate y with y^T A <= tol (componentwise
/// over columns) and y^T b > 0, expressed against the ORIGINAL scaling.
struct Phase1Result {
    enum class Status { feasible, infeasible, failure };
    Status status = Status::failure;
    Vec lambda;         // k entries, set when feasible
    Vec dual;           // m entries, set when infeasible
    double objective = 0.0;  // residual infeasibility at termination
    std::size_t pivots = 0;
};

Phase1Result phase1_simplex(const Matrix& A, std::span<const double> b, double tol = 1e-9,
                            std::size_t max_pivots = 0);

}  // namespace depthlab
