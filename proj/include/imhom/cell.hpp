#pragma once

#include "imhom/solver.hpp"

namespace imhom {

struct CellError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Positive stationary density of the adjoint generator on the torus,
// quadrature mean one.
struct InvariantMeasure {
    TorusGrid grid;
    Eigen::VectorXd values;
    double residual = 0.0;  // ||L^T m|| / ||m||
    double min_value = 0.0;
    double max_value = 0.0;
    SolveReport report;
    PositivityReport positivity;
};

InvariantMeasure invariant_measure(const CoefficientSamples& cs, const TorusGrid& g, double tol);

// (integral of b_i m)_{i=1..d}; must be small for inputs claiming the
// centering condition.
Eigen::VectorXd centering_defect(const CoefficientSamples& cs, const TorusGrid& g,
                                 const Eigen::VectorXd& m);

// Measure-weighted coefficients: atilde = a m, betatilde = b m, and the
// divergence-free drift btilde_i = betatilde_i - d_j atilde_ij.
struct TransformedCoefficients {
    TorusGrid grid;
    int d = 2;
    Eigen::MatrixXd atilde;     // N x d*d
    Eigen::MatrixXd betatilde;  // N x d
    Eigen::MatrixXd btilde;     // N x d
    double div_residual = 0.0;  // ||div btilde||_inf
    Eigen::VectorXd mean_btilde;

    double atilde_at(long node, int i, int j) const { return atilde(node, i * d + j); }
};

TransformedCoefficients transformed(const CoefficientSamples& cs, const TorusGrid& g,
                                    const Eigen::VectorXd& m);

// Antisymmetric matrix potential with d_j phi_ji = btilde_i, built from
// torus Poisson potentials: phi_ji = d_j f_i - d_i f_j for laplace f_i =
// btilde_i. Only the strict upper triangle is stored.
struct FluxCorrector {
    TorusGrid grid;
    int d = 2;
    std::vector<Eigen::VectorXd> upper;  // pair (i<j) -> phi_ij values
    double divergence_residual = 0.0;    // max_i ||d_j phi_ji - btilde_i||_inf
    double mean_abs = 0.0;               // max | mean phi_ij |
    std::vector<SolveReport> poisson_reports;

    int pair_index(int i, int j) const;         // i < j
    double phi_at(long node, int i, int j) const {  // any i != j, antisymmetric
        if (i == j) return 0.0;
        return i < j ? upper[static_cast<size_t>(pair_index(i, j))][node]
                     : -upper[static_cast<size_t>(pair_index(j, i))][node];
    }
};

FluxCorrector flux_corrector(const TransformedCoefficients& tc, double tol);

// Homogenized tensor of div((atilde + phi) grad .) with mean-zero periodic
// correctors; A_hat e_k = cell average of B(grad chi_k + e_k) on half-step
// faces. The node-based average is kept as the independent second route.
struct EffectiveTensor {
    int d = 2;
    Eigen::MatrixXd A_hat;
    Eigen::MatrixXd A_hat_node_based;
    std::vector<Eigen::VectorXd> correctors;
    std::vector<double> corrector_residuals;
    std::vector<SolveReport> reports;
    double symmetric_part_min_eig = 0.0;
    double asymmetry = 0.0;  // ||A_hat - A_hat^T||_max, reported not asserted
};

EffectiveTensor effective_tensor(const TransformedCoefficients& tc, const FluxCorrector& phi,
                                 double tol);

// Full node-value coefficient B = atilde + phi as an N x d*d table.
Eigen::MatrixXd combined_coefficient(const TransformedCoefficients& tc, const FluxCorrector& phi);

// One side of the interface problem, bundled.
struct CellSide {
    PeriodicCoefficients coeffs;
    TorusGrid grid;
    CoefficientSamples samples;
    InvariantMeasure measure;
    Eigen::VectorXd centering;
    TransformedCoefficients tc;
    FluxCorrector phi;
    EffectiveTensor tensor;
};

CellSide run_cell_side(const PeriodicCoefficients& pc, int n, double tol);

}  // namespace imhom
