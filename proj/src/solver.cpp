#include "imhom/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <chrono>
#include <cmath>
#include <sstream>
#include <unsupported/Eigen/IterativeSolvers>

namespace imhom {

namespace {

using Clock = std::chrono::steady_clock;

double rel_residual(const SpMat& M, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    double bn = b.norm();
    if (bn == 0.0) return (M * x).norm();
    return (b - M * x).norm() / bn;
}

int default_max_iter(long n) { return static_cast<int>(std::max<long>(4000, std::min<long>(n, 60000))); }

}  // namespace

std::pair<Eigen::VectorXd, SolveReport> solve_linear(const SpMat& M, const Eigen::VectorXd& rhs,
                                                     double tol, int max_iter,
                                                     const Eigen::VectorXd* guess) {
    if (M.rows() != M.cols()) throw std::invalid_argument("solve_linear: matrix must be square");
    if (M.rows() != rhs.size()) throw std::invalid_argument("solve_linear: rhs size mismatch");
    if (tol <= 0.0) throw std::invalid_argument("solve_linear: tol must be positive");
    auto t0 = Clock::now();
    SolveReport rep;

    if (rhs.norm() == 0.0 && !guess) {
        rep.method = "trivial";
        rep.rel_residual = 0.0;
        return {Eigen::VectorXd::Zero(M.rows()), rep};
    }

    long zero_diag = 0;
    for (long i = 0; i < M.rows(); ++i)
        if (M.coeff(i, i) == 0.0) ++zero_diag;
    if (zero_diag > 0) {
        std::ostringstream os;
        os << "jacobi preconditioner: " << zero_diag
           << " zero diagonal entr(ies); identity scaling used there";
        rep.warnings.push_back(os.str());
    }

    int iters = max_iter > 0 ? max_iter : default_max_iter(M.rows());

    Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<double>> bicg;
    bicg.setTolerance(tol);
    bicg.setMaxIterations(iters);
    bicg.compute(M);
    Eigen::VectorXd x = guess ? bicg.solveWithGuess(rhs, *guess).eval() : bicg.solve(rhs).eval();
    rep.iterations = static_cast<int>(bicg.iterations());
    rep.method = "bicgstab+jacobi";
    rep.rel_residual = rel_residual(M, x, rhs);

    if (!(rep.rel_residual <= tol) || !x.allFinite()) {
        // restarted GMRES fallback, warm-started from the best finite iterate
        Eigen::GMRES<SpMat, Eigen::DiagonalPreconditioner<double>> gmres;
        gmres.set_restart(60);
        gmres.setTolerance(tol);
        gmres.setMaxIterations(iters);
        gmres.compute(M);
        Eigen::VectorXd xg;
        if (x.allFinite())
            xg = gmres.solveWithGuess(rhs, x);
        else
            xg = gmres.solve(rhs);
        double rg = rel_residual(M, xg, rhs);
        if (xg.allFinite() && (!x.allFinite() || rg < rep.rel_residual)) {
            x = xg;
            rep.rel_residual = rg;
            rep.iterations += static_cast<int>(gmres.iterations());
            rep.method = "bicgstab+jacobi/gmres-fallback";
        }
        if (!(rep.rel_residual <= tol)) {
            std::ostringstream os;
            os << "linear solve stagnated: residual " << rep.rel_residual << " > tol " << tol
               << " after " << rep.iterations << " iterations (" << rep.method << ")";
            throw SolveFailure(os.str(), x, rep.rel_residual);
        }
    }

    rep.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return {x, rep};
}

std::pair<Eigen::VectorXd, SolveReport> solve_nullspace(const SpMat& M,
                                                        const Eigen::VectorXd& weights, double tol,
                                                        int refine_rounds) {
    const long n = M.rows();
    if (weights.size() != n) throw std::invalid_argument("solve_nullspace: weight size mismatch");

    // Border scaled to the typical diagonal magnitude so Jacobi conditioning
    // carries over. The (n,n) entry does not change the solution: the border
    // unknown vanishes identically for a consistent kernel system, it only
    // keeps the preconditioned system balanced.
    double rho = 0.0;
    for (long i = 0; i < n; ++i) rho += std::abs(M.coeff(i, i));
    rho = std::max(rho / n, 1.0);
    double sigma = rho / weights.maxCoeff();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(M.nonZeros()) + 2 * n + 1);
    for (long i = 0; i < n; ++i)
        for (SpMat::InnerIterator it(M, i); it; ++it)
            trip.emplace_back(static_cast<long>(it.row()), static_cast<long>(it.col()), it.value());
    for (long i = 0; i < n; ++i) {
        trip.emplace_back(i, n, rho);                    // column e
        trip.emplace_back(n, i, sigma * weights[i]);     // normalization row
    }
    trip.emplace_back(n, n, rho);
    SpMat B(n + 1, n + 1);
    B.setFromTriplets(trip.begin(), trip.end());
    B.makeCompressed();

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs[n] = sigma;  // w.m = 1 after the row scaling

    SolveReport rep;
    Eigen::VectorXd x;
    try {
        auto [x0, r0] = solve_linear(B, rhs, tol);
        x = x0;
        rep = r0;
    } catch (const SolveFailure& f) {
        throw NullspaceError(std::string("bordered kernel solve failed (") + f.what() +
                             "); kernel dimension may exceed 1 - refine the grid");
    }
    for (int round = 0; round < refine_rounds; ++round) {
        Eigen::VectorXd res = rhs - B * x;
        if (res.norm() <= 1e-16 * rho) break;
        try {
            auto [dx, rr] = solve_linear(B, res, tol);
            x += dx;
            rep.iterations += rr.iterations;
        } catch (const SolveFailure& f) {
            if (f.residual < 1.0 && f.best.allFinite()) x += f.best;
            rep.warnings.push_back("kernel refinement stalled at the residual floor");
            break;
        }
    }

    Eigen::VectorXd m = x.head(n);
    double mass = weights.dot(m);
    if (!(std::abs(mass) > 1e-12))
        throw NullspaceError("bordered kernel solve returned zero mass; kernel dimension may "
                             "exceed 1 - refine the grid");
    m /= mass;  // quadrature mean exactly one

    double kernel_res = (M * m).norm() / m.norm();
    rep.rel_residual = kernel_res;
    rep.method += "+bordered";
    if (!(kernel_res <= tol)) {
        std::ostringstream os;
        os << "kernel residual " << kernel_res << " above tol " << tol
           << "; kernel dimension may exceed 1 - refine the grid";
        throw NullspaceError(os.str());
    }
    double mn = m.minCoeff();
    if (mn < -tol * m.cwiseAbs().maxCoeff()) {
        long at = 0;
        m.minCoeff(&at);
        std::ostringstream os;
        os << "invariant measure positivity failure: min value " << mn << " at node " << at;
        throw NullspaceError(os.str());
    }
    return {m, rep};
}

SpMat torus_laplacian(const TorusGrid& g) {
    CoefficientSamples cs;
    cs.d = g.d;
    cs.num_nodes = g.num_nodes;
    cs.a = Eigen::MatrixXd::Zero(g.num_nodes, g.d * g.d);
    for (int k = 0; k < g.d; ++k) cs.a.col(k * g.d + k).setOnes();
    cs.b = Eigen::MatrixXd::Zero(g.num_nodes, g.d);
    return assemble_nondiv(cs, g, 0.0);
}

std::pair<Eigen::VectorXd, SolveReport> solve_mean_zero(const SpMat& M,
                                                        const Eigen::VectorXd& weights,
                                                        const Eigen::VectorXd& rhs, double tol) {
    const long n = M.rows();
    if (rhs.norm() == 0.0) {
        SolveReport rep;
        rep.method = "trivial";
        return {Eigen::VectorXd::Zero(n), rep};
    }
    double rho = 0.0;
    for (long i = 0; i < n; ++i) rho += std::abs(M.coeff(i, i));
    rho = std::max(rho / n, 1.0);
    double sigma = rho / weights.maxCoeff();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(M.nonZeros()) + 2 * n);
    for (long i = 0; i < n; ++i)
        for (SpMat::InnerIterator it(M, i); it; ++it)
            trip.emplace_back(static_cast<long>(it.row()), static_cast<long>(it.col()), it.value());
    for (long i = 0; i < n; ++i) {
        trip.emplace_back(i, n, rho);
        trip.emplace_back(n, i, sigma * weights[i]);
    }
    trip.emplace_back(n, n, rho);
    SpMat B(n + 1, n + 1);
    B.setFromTriplets(trip.begin(), trip.end());
    B.makeCompressed();

    Eigen::VectorXd rhs_b = Eigen::VectorXd::Zero(n + 1);
    rhs_b.head(n) = rhs;

    auto [x, rep] = solve_linear(B, rhs_b, tol);
    Eigen::VectorXd u = x.head(n);
    double wsum = weights.sum();
    u.array() -= weights.dot(u) / wsum;  // pin the weighted mean exactly
    rep.rel_residual = (rhs - M * u).norm() / rhs.norm();
    rep.method += "+mean-zero";
    return {u, rep};
}

std::pair<Eigen::VectorXd, SolveReport> solve_poisson_torus(const TorusGrid& g,
                                                            const Eigen::VectorXd& rhs, double tol,
                                                            const SpMat* laplacian) {
    double mean = quadrature_mean(g, rhs);
    double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    if (std::abs(mean) > tol * scale) {
        std::ostringstream os;
        os << "poisson rhs has nonzero quadrature mean " << mean << " (tolerance " << tol * scale
           << ")";
        throw IncompatibleRhs(os.str());
    }
    Eigen::VectorXd f = rhs.array() - mean;

    SpMat local;
    if (!laplacian) {
        local = torus_laplacian(g);
        laplacian = &local;
    }
    Eigen::VectorXd w = Eigen::VectorXd::Constant(g.num_nodes, g.cell_volume());
    return solve_mean_zero(*laplacian, w, f, tol);
}

std::pair<Eigen::VectorXd, SolveReport> solve_with_dirichlet(
    const SpMat& M, const std::vector<char>& interior, const Eigen::VectorXd& interior_rhs,
    const Eigen::VectorXd& boundary_data, double tol, const Eigen::VectorXd* guess,
    int refine_rounds) {
    const long n = M.rows();
    std::vector<long> to_sub(static_cast<size_t>(n), -1);
    long ni = 0;
    for (long i = 0; i < n; ++i)
        if (interior[static_cast<size_t>(i)]) to_sub[static_cast<size_t>(i)] = ni++;

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
    for (long i = 0; i < n; ++i) {
        long si = to_sub[static_cast<size_t>(i)];
        if (si < 0) continue;
        rhs[si] = interior_rhs[i];
        for (SpMat::InnerIterator it(M, i); it; ++it) {
            long j = it.col();
            long sj = to_sub[static_cast<size_t>(j)];
            if (sj >= 0)
                trip.emplace_back(si, sj, it.value());
            else
                rhs[si] -= it.value() * boundary_data[j];
        }
    }
    SpMat Mi(ni, ni);
    Mi.setFromTriplets(trip.begin(), trip.end());
    Mi.makeCompressed();

    Eigen::VectorXd g0;
    const Eigen::VectorXd* gp = nullptr;
    if (guess) {
        g0.resize(ni);
        for (long i = 0; i < n; ++i)
            if (to_sub[static_cast<size_t>(i)] >= 0) g0[to_sub[static_cast<size_t>(i)]] = (*guess)[i];
        gp = &g0;
    }

    double amax = 0.0;
    for (long k = 0; k < Mi.nonZeros(); ++k) amax = std::max(amax, std::abs(Mi.valuePtr()[k]));

    auto [xi, rep] = solve_linear(Mi, rhs, tol, 0, gp);
    for (int round = 0; round < refine_rounds; ++round) {
        Eigen::VectorXd res = rhs - Mi * xi;
        double floor = 16.0 * std::numeric_limits<double>::epsilon() * amax * xi.norm();
        if (res.norm() <= floor) break;
        try {
            auto [dx, rr] = solve_linear(Mi, res, tol);
            xi += dx;
            rep.iterations += rr.iterations;
        } catch (const SolveFailure& f) {
            if (f.best.allFinite() && f.residual < 1.0) xi += f.best;
            rep.warnings.push_back("dirichlet refinement stalled at the residual floor");
            break;
        }
    }
    rep.rel_residual = rhs.norm() > 0 ? (rhs - Mi * xi).norm() / rhs.norm() : (Mi * xi).norm();

    Eigen::VectorXd x(n);
    for (long i = 0; i < n; ++i) {
        long si = to_sub[static_cast<size_t>(i)];
        x[i] = si >= 0 ? xi[si] : boundary_data[i];
    }
    return {x, rep};
}

}  // namespace imhom
