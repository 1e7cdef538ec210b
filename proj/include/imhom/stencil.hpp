#pragma once

#include <Eigen/Sparse>
#include <string>

#include "imhom/grid.hpp"

namespace imhom {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Generator positivity of the centered stencil, checked node by node at
// assembly: a_ii/h_i^2 - sum_{j!=i} |a_ij|/(h_i h_j) >= |s b_i|/(2 h_i).
// Violations are reported, not fatal.
struct PositivityReport {
    bool ok = true;
    long violations = 0;
    long worst_node = -1;
    int worst_axis = -1;
    double worst_margin = 0.0;
    double suggested_h = 0.0;  // 0 when refinement cannot restore positivity
    std::string message() const;
};

// Row policy for slab boundary levels. Identity rows give the forward
// Dirichlet operator. OperatorClipped keeps the stencil on boundary rows
// (out-of-domain neighbors dropped) so the exact transpose carries the
// doubly-divergence coupling from boundary data into interior equations.
enum class BoundaryRows { Identity, OperatorClipped };

// L_h = a_ij d_ij + drift_scale * b_i d_i with the 3-point second
// difference, the symmetric 4-point mixed stencil and centered first
// differences. Interior row sums vanish exactly.
SpMat assemble_nondiv(const CoefficientSamples& cs, const TorusGrid& g, double drift_scale,
                      PositivityReport* positivity = nullptr);
SpMat assemble_nondiv(const CoefficientSamples& cs, const SlabGrid& g, double drift_scale,
                      BoundaryRows rows = BoundaryRows::Identity,
                      PositivityReport* positivity = nullptr);

// Exact transpose; the discrete duality <L u, m> = <u, L^T m> holds to
// machine precision by construction.
SpMat adjoint(const SpMat& Lh);

}  // namespace imhom
