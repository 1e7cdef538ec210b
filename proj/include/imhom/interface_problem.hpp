#pragma once

#include "imhom/cell.hpp"
#include "imhom/fitting.hpp"

namespace imhom {

struct InterfaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cutoffs matching the deviation-field construction: psi_plus = 0 for
// y1 <= 0 and 1 for y1 >= 1 (quintic smoothstep between), psi_minus mirrored.
double cutoff_plus(double y1);
double cutoff_minus(double y1);

// Samples a torus field at slab nodes; requires h1 = ht = torus spacing and
// integer R so every slab node projects onto a torus node exactly.
Eigen::VectorXd sample_torus_on_slab(const SlabGrid& slab, const TorusGrid& torus,
                                     const Eigen::VectorXd& torus_values);

struct FluxMatch {
    double q_minus = 0.0;
    double plus_integral = 0.0;   // slice-average of a+,11 m+
    double minus_integral = 0.0;  // slice-average of a-,11 m-
    double plus_variation = 0.0;  // relative slice variation
    double minus_variation = 0.0;
};

// q- from q+ and the conserved one-sided slice fluxes. The slice integrals
// of a11 m must be constant across slices (checked, relative variation
// <= var_tol).
FluxMatch compute_q_minus(const CellSide& plus, const CellSide& minus, double q_plus,
                          double var_tol);

struct SlabMeasure {
    SlabGrid grid;
    Eigen::VectorXd values;
    Eigen::VectorXd boundary_data;  // full-length, nonzero at boundary levels
    double residual = 0.0;          // interior doubly-divergence residual
    double min_value = 0.0, max_value = 0.0;
    double data_min = 0.0, data_max = 0.0;
    double max_principle_margin = 0.0;  // max overshoot beyond the data range
    bool boundary_range_bounded = false;  // within [data_min, data_max] + allowance
    SolveReport report;
    PositivityReport positivity;
};

// The truncated-slab invariant measure: exact adjoint of the clipped
// non-divergence assembly on interior rows, Dirichlet identity rows with
// data q+ m+ at y1 = R, q- m- at y1 = -R. The boundary-data range check is
// recorded (it binds only for fields whose one-sided measures are flat at
// the cut); escaping the one-sided measure envelope [min/2, 3 max/2] is a
// structural error when the stencil was a generator.
SlabMeasure solve_slab_measure(const CoefficientSamples& cs, const SlabGrid& slab,
                               const CellSide& plus, const CellSide& minus, double q_plus,
                               double q_minus, double tol);

struct DeviationField {
    Eigen::VectorXd v;           // m_R - q+ m+ psi+ - q- m- psi-
    Eigen::VectorXd f;           // adjoint residual of the cutoff profile
    double identity_residual = 0.0;  // || L^T v - f || / scale on interior rows
    double support_defect = 0.0;     // max |f| outside [-1-2.5h, 1+2.5h], relative
    double f_max = 0.0;
};

DeviationField deviation_field(const CoefficientSamples& cs, const SlabMeasure& sm,
                               const CellSide& plus, const CellSide& minus, double q_plus,
                               double q_minus);

// Slice integrals of a11 v for |y1| >= 1 (flux-zero identity diagnostic).
struct SliceValues {
    std::vector<double> y1;
    std::vector<double> value;
    double max_abs = 0.0;
};
SliceValues flux_zero_check(const SlabGrid& slab, const CoefficientSamples& cs,
                            const Eigen::VectorXd& v);

// Slice integrals of a11 m_R over every slice, against the matched one-sided
// flux q+ <a+,11 m+>.
SliceValues flux_constancy(const SlabGrid& slab, const CoefficientSamples& cs,
                           const Eigen::VectorXd& m_R);

enum class Side { plus, minus };

struct DecayFit {
    double window_lo = 0.0, window_hi = 0.0;
    std::vector<double> y1;
    std::vector<double> sup_v;
    std::vector<double> sup_grad_v;
    ExpFit value_fit;
    ExpFit gradient_fit;
    bool accepted = false;  // value fit: rate > 0 and R^2 >= 0.98
};

// Least-squares exponential fit of the per-slice sup norms of v and grad v
// over a window inside [2, R-2] (mirrored for the minus side).
DecayFit decay_fit(const SlabGrid& slab, const Eigen::VectorXd& v, Side side, double window_lo,
                   double window_hi);

// Interface flux corrector (d = 2): stream function Psi on the slab with
// d2 Psi = btilde_1, d1 Psi = -btilde_2, matched against the one-sided
// correctors by antisymmetric constants M+-.
struct InterfaceFluxCorrector {
    Eigen::VectorXd psi;           // phi_btilde,21 = Psi, phi_btilde,12 = -Psi
    Eigen::MatrixXd M_plus;        // antisymmetric 2x2 matching constants
    Eigen::MatrixXd M_minus;
    double curl_residual = 0.0;    // sup |d1 Psi + btilde_2|
    double grad_residual = 0.0;    // sup |d2 Psi - btilde_1|
    double slice_mean_defect = 0.0;  // max per-slice mean of btilde_1
    ExpFit match_plus;             // decay of |phi_btilde - q+ phi+ + M+|
    ExpFit match_minus;
    Eigen::MatrixXd btilde;        // slab drift (N x 2), kept for the sampler
};

InterfaceFluxCorrector interface_flux_corrector(const CoefficientSamples& cs,
                                                const SlabMeasure& sm, const CellSide& plus,
                                                const CellSide& minus, double q_plus,
                                                double q_minus);

// Everything the downstream epsilon-experiment needs from the interface.
struct InterfaceResult {
    double q_plus = 1.0;
    double q_minus = 1.0;
    FluxMatch flux_match;
    SlabMeasure slab;
    CoefficientSamples slab_samples;
    DeviationField deviation;
    SliceValues flux_zero;
    SliceValues flux_const;
    DecayFit decay_plus;
    DecayFit decay_minus;
    InterfaceFluxCorrector corrector;
};

}  // namespace imhom
