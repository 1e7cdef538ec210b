#pragma once

#include <string>
#include <vector>

#include "imhom/stencil.hpp"

namespace imhom {

struct SolveReport {
    int iterations = 0;
    double rel_residual = 0.0;  // recomputed from the returned solution
    double seconds = 0.0;
    std::string method;
    std::vector<std::string> warnings;
};

// Carried by solve failures: the best iterate found and its residual.
struct SolveFailure : std::runtime_error {
    SolveFailure(const std::string& what, Eigen::VectorXd best_, double residual_)
        : std::runtime_error(what), best(std::move(best_)), residual(residual_) {}
    Eigen::VectorXd best;
    double residual = 0.0;
};

struct NullspaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IncompatibleRhs : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// BiCGStab with Jacobi preconditioning, restarted-GMRES fallback. The
// reported residual is ||Mx-b||/||b|| recomputed from x. Zero diagonal
// entries demote the preconditioner to identity scaling on those rows, with
// a warning in the report.
std::pair<Eigen::VectorXd, SolveReport> solve_linear(const SpMat& M, const Eigen::VectorXd& rhs,
                                                     double tol, int max_iter = 0,
                                                     const Eigen::VectorXd* guess = nullptr);

// Kernel of the adjoint generator with unit quadrature mass, via the
// bordered system [M, e; w^T, 0][m; lambda] = [0; 1] plus iterative
// refinement. Returns m with w.m = 1 exactly (post-scaled), all entries
// positive, ||M m||/||m|| <= tol.
std::pair<Eigen::VectorXd, SolveReport> solve_nullspace(const SpMat& M,
                                                        const Eigen::VectorXd& weights, double tol,
                                                        int refine_rounds = 2);

// Mean-zero periodic solution of the 5/7-point discrete Laplacian. The rhs
// quadrature mean must vanish: a defect below tol is subtracted, above tol
// it is an incompatibility error. Pass a prebuilt Laplacian to reuse it.
std::pair<Eigen::VectorXd, SolveReport> solve_poisson_torus(const TorusGrid& g,
                                                            const Eigen::VectorXd& rhs, double tol,
                                                            const SpMat* laplacian = nullptr);

// Mean-zero solution of a consistent singular system whose kernel is the
// constants, via the same bordered construction as solve_nullspace.
std::pair<Eigen::VectorXd, SolveReport> solve_mean_zero(const SpMat& M,
                                                        const Eigen::VectorXd& weights,
                                                        const Eigen::VectorXd& rhs, double tol);

// 5/7-point Laplacian on the torus (A = I, b = 0).
SpMat torus_laplacian(const TorusGrid& g);

// Dirichlet elimination: solves rows/cols marked interior with the boundary
// data folded into the rhs, then pastes the data back bit-exactly. An
// initial guess shrinks the Krylov target; refinement rounds re-solve the
// defect, pushing the true residual to the rounding floor (the decay
// diagnostics read the solution many orders below the data scale).
std::pair<Eigen::VectorXd, SolveReport> solve_with_dirichlet(
    const SpMat& M, const std::vector<char>& interior, const Eigen::VectorXd& interior_rhs,
    const Eigen::VectorXd& boundary_data, double tol, const Eigen::VectorXd* guess = nullptr,
    int refine_rounds = 0);

}  // namespace imhom
