#include "imhom/cell.hpp"

#include <cmath>
#include <sstream>

#include "imhom/facediv.hpp"

namespace imhom {

InvariantMeasure invariant_measure(const CoefficientSamples& cs, const TorusGrid& g, double tol) {
    InvariantMeasure im;
    im.grid = g;
    SpMat L = assemble_nondiv(cs, g, 1.0, &im.positivity);
    SpMat M = adjoint(L);
    Eigen::VectorXd w = Eigen::VectorXd::Constant(g.num_nodes, g.cell_volume());
    auto [m, rep] = solve_nullspace(M, w, tol);
    im.values = std::move(m);
    im.report = rep;
    im.residual = rep.rel_residual;
    im.min_value = im.values.minCoeff();
    im.max_value = im.values.maxCoeff();
    if (!(im.min_value > 0.0)) {
        std::ostringstream os;
        os << "invariant measure not strictly positive: min " << im.min_value;
        throw CellError(os.str());
    }
    return im;
}

Eigen::VectorXd centering_defect(const CoefficientSamples& cs, const TorusGrid& g,
                                 const Eigen::VectorXd& m) {
    Eigen::VectorXd defect = Eigen::VectorXd::Zero(g.d);
    for (int i = 0; i < g.d; ++i) defect[i] = (cs.b.col(i).array() * m.array()).sum();
    return defect * g.cell_volume();
}

TransformedCoefficients transformed(const CoefficientSamples& cs, const TorusGrid& g,
                                    const Eigen::VectorXd& m) {
    TransformedCoefficients tc;
    tc.grid = g;
    tc.d = g.d;
    int d = g.d;
    tc.atilde.resize(g.num_nodes, d * d);
    for (int c = 0; c < d * d; ++c) tc.atilde.col(c) = cs.a.col(c).cwiseProduct(m);
    tc.betatilde.resize(g.num_nodes, d);
    for (int c = 0; c < d; ++c) tc.betatilde.col(c) = cs.b.col(c).cwiseProduct(m);

    tc.btilde.resize(g.num_nodes, d);
    for (int i = 0; i < d; ++i) {
        Eigen::VectorXd bi = tc.betatilde.col(i);
        for (int j = 0; j < d; ++j) bi -= centered_diff(g, tc.atilde.col(i * d + j), j);
        tc.btilde.col(i) = bi;
    }

    Eigen::VectorXd div = Eigen::VectorXd::Zero(g.num_nodes);
    for (int i = 0; i < d; ++i) div += centered_diff(g, tc.btilde.col(i), i);
    tc.div_residual = div.cwiseAbs().maxCoeff();
    tc.mean_btilde.resize(d);
    for (int i = 0; i < d; ++i) tc.mean_btilde[i] = quadrature_mean(g, tc.btilde.col(i));
    return tc;
}

int FluxCorrector::pair_index(int i, int j) const {
    // strict upper triangle, row-major: (0,1),(0,2),...,(1,2),...
    int idx = 0;
    for (int r = 0; r < i; ++r) idx += d - 1 - r;
    return idx + (j - i - 1);
}

FluxCorrector flux_corrector(const TransformedCoefficients& tc, double tol) {
    const TorusGrid& g = tc.grid;
    int d = tc.d;
    double h2 = g.h * g.h;
    double scale = std::max(1.0, tc.atilde.cwiseAbs().maxCoeff());
    double pre_tol = 1000.0 * h2 * scale;
    if (tc.div_residual > pre_tol)
        throw CellError("flux corrector: div btilde residual " + std::to_string(tc.div_residual) +
                        " above tolerance " + std::to_string(pre_tol));
    for (int i = 0; i < d; ++i)
        if (std::abs(tc.mean_btilde[i]) > pre_tol)
            throw CellError("flux corrector: btilde mean above tolerance");

    FluxCorrector fc;
    fc.grid = g;
    fc.d = d;

    SpMat lap = torus_laplacian(g);
    std::vector<Eigen::VectorXd> f(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        auto [fi, rep] = solve_poisson_torus(g, tc.btilde.col(i), tol, &lap);
        f[static_cast<size_t>(i)] = std::move(fi);
        fc.poisson_reports.push_back(rep);
    }

    fc.upper.resize(static_cast<size_t>(d * (d - 1) / 2));
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            fc.upper[static_cast<size_t>(fc.pair_index(i, j))] =
                centered_diff(g, f[static_cast<size_t>(j)], i) -
                centered_diff(g, f[static_cast<size_t>(i)], j);

    // residual of d_j phi_ji = btilde_i and the mean-zero invariant
    double res = 0.0;
    for (int i = 0; i < d; ++i) {
        Eigen::VectorXd div = Eigen::VectorXd::Zero(g.num_nodes);
        for (int j = 0; j < d; ++j) {
            if (j == i) continue;
            Eigen::VectorXd phi_ji(g.num_nodes);
            for (long node = 0; node < g.num_nodes; ++node) phi_ji[node] = fc.phi_at(node, j, i);
            div += centered_diff(g, phi_ji, j);
        }
        res = std::max(res, (div - tc.btilde.col(i)).cwiseAbs().maxCoeff());
    }
    fc.divergence_residual = res;
    for (const auto& p : fc.upper)
        fc.mean_abs = std::max(fc.mean_abs, std::abs(quadrature_mean(g, p)));
    return fc;
}

Eigen::MatrixXd combined_coefficient(const TransformedCoefficients& tc, const FluxCorrector& phi) {
    int d = tc.d;
    Eigen::MatrixXd B = tc.atilde;
    for (long node = 0; node < tc.grid.num_nodes; ++node)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (i != j) B(node, i * d + j) += phi.phi_at(node, i, j);
    return B;
}

EffectiveTensor effective_tensor(const TransformedCoefficients& tc, const FluxCorrector& phi,
                                 double tol) {
    const TorusGrid& g = tc.grid;
    int d = tc.d;
    EffectiveTensor et;
    et.d = d;
    et.A_hat.setZero(d, d);
    et.A_hat_node_based.setZero(d, d);

    Eigen::MatrixXd B = combined_coefficient(tc, phi);
    SpMat K = assemble_face_div_torus(g, B);
    Eigen::VectorXd w = Eigen::VectorXd::Constant(g.num_nodes, g.cell_volume());

    for (int k = 0; k < d; ++k) {
        Eigen::VectorXd rhs = corrector_rhs_torus(g, B, k);
        auto [chi, rep] = solve_mean_zero(K, w, rhs, tol);
        double res = rhs.norm() > 0 ? (rhs - K * chi).norm() / rhs.norm() : (K * chi).norm();
        et.corrector_residuals.push_back(res);
        et.reports.push_back(rep);
        et.A_hat.col(k) = face_flux_average(g, B, chi, k);
        et.A_hat_node_based.col(k) = node_flux_average(g, B, chi, k);
        et.correctors.push_back(std::move(chi));
    }

    Eigen::MatrixXd sym = 0.5 * (et.A_hat + et.A_hat.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    et.symmetric_part_min_eig = es.eigenvalues().minCoeff();
    et.asymmetry = (et.A_hat - et.A_hat.transpose()).cwiseAbs().maxCoeff();
    if (!(et.symmetric_part_min_eig > 0.0))
        throw CellError("effective tensor symmetric part not positive definite");
    return et;
}

CellSide run_cell_side(const PeriodicCoefficients& pc, int n, double tol) {
    CellSide side;
    side.coeffs = pc;
    side.grid = TorusGrid::make(pc.d, n);
    side.samples = sample(pc, side.grid);
    side.measure = invariant_measure(side.samples, side.grid, tol);
    side.centering = centering_defect(side.samples, side.grid, side.measure.values);
    side.tc = transformed(side.samples, side.grid, side.measure.values);
    side.phi = flux_corrector(side.tc, tol);
    side.tensor = effective_tensor(side.tc, side.phi, tol);
    return side;
}

}  // namespace imhom
