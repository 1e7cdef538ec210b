#include "imhom/homogen.hpp"

#include <chrono>
#include <cmath>

namespace imhom {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SlabCoefficientSampler::SlabCoefficientSampler(const CoefficientField& field,
                                               const InterfaceResult& ir, const CellSide& plus,
                                               const CellSide& minus)
    : slab_(ir.slab.grid),
      psi_(ir.corrector.psi),
      m_slab_(ir.slab.values),
      cell_grid_(plus.grid),
      q_plus_(ir.q_plus),
      q_minus_(ir.q_minus),
      m21_plus_(ir.corrector.M_plus(1, 0)),
      m21_minus_(ir.corrector.M_minus(1, 0)) {
    if (slab_.d != 2) throw HomogenError("epsilon experiment is implemented for d = 2 only");
    const CoefficientSamples& cs = ir.slab_samples;
    atil_slab_.resize(slab_.num_nodes, 4);
    for (int c = 0; c < 4; ++c) atil_slab_.col(c) = cs.a.col(c).cwiseProduct(m_slab_);
    (void)field;

    atil_plus_.resize(cell_grid_.num_nodes, 4);
    atil_minus_.resize(cell_grid_.num_nodes, 4);
    for (int c = 0; c < 4; ++c) {
        atil_plus_.col(c) = plus.samples.a.col(c).cwiseProduct(plus.measure.values);
        atil_minus_.col(c) = minus.samples.a.col(c).cwiseProduct(minus.measure.values);
    }
    phi_plus_ = plus.phi.upper[0];
    phi_minus_ = minus.phi.upper[0];
    m_plus_ = plus.measure.values;
    m_minus_ = minus.measure.values;
}

double SlabCoefficientSampler::torus_bilinear(const Eigen::VectorXd& values, double y1,
                                              double y2) const {
    const TorusGrid& g = cell_grid_;
    double u = y1 - std::floor(y1);
    double v = y2 - std::floor(y2);
    double fi = u / g.h, fj = v / g.h;
    int i = static_cast<int>(std::floor(fi)) % g.n;
    int j = static_cast<int>(std::floor(fj)) % g.n;
    double s = fi - std::floor(fi), t = fj - std::floor(fj);
    int ip = (i + 1) % g.n, jp = (j + 1) % g.n;
    auto at = [&](int a, int b) {
        MultiIndex mi{};
        mi[0] = a;
        mi[1] = b;
        return values[g.index(mi)];
    };
    return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(ip, j) + (1 - s) * t * at(i, jp) +
           s * t * at(ip, jp);
}

double SlabCoefficientSampler::slab_bilinear(const Eigen::VectorXd& values, double y1,
                                             double y2) const {
    const SlabGrid& g = slab_;
    double f1 = (y1 + g.R) / g.h1;
    int i = static_cast<int>(std::floor(f1));
    i = std::max(0, std::min(i, g.n1 - 1));
    double s = f1 - i;
    s = std::max(0.0, std::min(s, 1.0));
    double v = y2 - std::floor(y2);
    double f2 = v / g.ht;
    int j = static_cast<int>(std::floor(f2)) % g.nt;
    double t = f2 - std::floor(f2);
    int jp = (j + 1) % g.nt;
    auto at = [&](int a, int b) {
        MultiIndex mi{};
        mi[0] = a;
        mi[1] = b;
        return values[g.index(mi)];
    };
    return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) + (1 - s) * t * at(i, jp) +
           s * t * at(i + 1, jp);
}

Eigen::MatrixXd SlabCoefficientSampler::coefficient(const Eigen::VectorXd& y) const {
    Eigen::MatrixXd B(2, 2);
    double y1 = y[0], y2 = y[1];
    if (std::abs(y1) <= slab_.R) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) B(i, j) = slab_bilinear(atil_slab_.col(i * 2 + j), y1, y2);
        double psi = slab_bilinear(psi_, y1, y2);
        B(1, 0) += psi;
        B(0, 1) -= psi;
        return B;
    }
    bool plus = y1 > 0.0;
    const Eigen::MatrixXd& atil = plus ? atil_plus_ : atil_minus_;
    double q = plus ? q_plus_ : q_minus_;
    double m21 = plus ? m21_plus_ : m21_minus_;
    const Eigen::VectorXd& phi01 = plus ? phi_plus_ : phi_minus_;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) B(i, j) = q * torus_bilinear(atil.col(i * 2 + j), y1, y2);
    // phi_btilde(1,0) matches q phi(1,0) - M(1,0) asymptotically
    double p = q * (-torus_bilinear(phi01, y1, y2)) - m21;
    B(1, 0) += p;
    B(0, 1) -= p;
    return B;
}

double SlabCoefficientSampler::measure(const Eigen::VectorXd& y) const {
    double y1 = y[0], y2 = y[1];
    if (std::abs(y1) <= slab_.R) return slab_bilinear(m_slab_, y1, y2);
    bool plus = y1 > 0.0;
    return (plus ? q_plus_ : q_minus_) * torus_bilinear(plus ? m_plus_ : m_minus_, y1, y2);
}

double source_preset(const Eigen::VectorXd& x) {
    double r2 = x.squaredNorm() / (0.42 * 0.42);
    if (r2 >= 1.0) return 0.0;
    double bump = std::exp(1.0 - 1.0 / (1.0 - r2));
    double trig = std::cos(kPi * x[0]) * std::cos(kPi * x[1]);
    return 12.0 * bump * trig;
}

std::pair<Eigen::VectorXd, SolveReport> solve_domain(const DomainGrid& g, const FaceTensor& B,
                                                     const Eigen::VectorXd& rhs, double tol) {
    SpMat K = assemble_face_div_domain(g, B);
    return solve_linear(K, rhs, tol);
}

std::pair<Eigen::VectorXd, SolveReport> solve_oscillating(const SlabCoefficientSampler& sampler,
                                                          const DomainGrid& g, double eps,
                                                          double tol) {
    if (g.h > eps / 8.0 + 1e-12)
        throw HomogenError("oscillating solve: grid spacing must not exceed eps/8");
    FaceTensor B = [&](int, const Eigen::VectorXd& center) {
        return sampler.coefficient(center / eps);
    };
    Eigen::VectorXd rhs(g.num_nodes);
    for (long idx = 0; idx < g.num_nodes; ++idx) {
        Eigen::VectorXd x = g.coords(idx);
        rhs[idx] = source_preset(x) * sampler.measure(x / eps);
    }
    return solve_domain(g, B, rhs, tol);
}

std::pair<Eigen::VectorXd, SolveReport> solve_effective(const PiecewiseTensor& pt,
                                                        const DomainGrid& g, double q_plus,
                                                        double q_minus, double tol) {
    double h = g.h;
    Eigen::MatrixXd Ap = pt.q_plus * pt.plus;
    Eigen::MatrixXd Am = pt.q_minus * pt.minus;
    FaceTensor B = [&, h, Ap, Am](int axis, const Eigen::VectorXd& center) {
        if (axis == 0 && std::abs(center[0]) < 0.25 * h) {
            // material face: harmonic mean of the normal components,
            // arithmetic elsewhere
            Eigen::MatrixXd m = 0.5 * (Ap + Am);
            m(0, 0) = 2.0 / (1.0 / Ap(0, 0) + 1.0 / Am(0, 0));
            return m;
        }
        return center[0] > 0.0 ? Ap : Am;
    };
    Eigen::VectorXd rhs(g.num_nodes);
    for (long idx = 0; idx < g.num_nodes; ++idx) {
        Eigen::VectorXd x = g.coords(idx);
        rhs[idx] = source_preset(x) * (x[0] > 0.0 ? q_plus : q_minus);
    }
    return solve_domain(g, B, rhs, tol);
}

ConvergenceExperiment convergence_study(const SlabCoefficientSampler& sampler,
                                        const PiecewiseTensor& pt, double q_plus, double q_minus,
                                        const std::vector<double>& eps_list, int resolution,
                                        double tol, const Budget& budget) {
    if (eps_list.size() < 3) throw HomogenError("convergence study needs at least 3 epsilons");
    for (size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw HomogenError("epsilon list must be strictly decreasing");

    ConvergenceExperiment ex;
    auto t0 = std::chrono::steady_clock::now();
    double u0_scale = 0.0;

    for (double eps : eps_list) {
        int n = static_cast<int>(std::ceil(resolution / eps));
        if (n % 2) ++n;  // keep the interface on a face
        while (1.0 / n > eps / 8.0) n += 2;
        DomainGrid g = DomainGrid::make(2, n);
        if (g.num_nodes > budget.max_unknowns) {
            ex.truncated = true;
            break;
        }
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > budget.max_seconds) {
            ex.truncated = true;
            break;
        }

        auto t1 = std::chrono::steady_clock::now();
        auto [ue, rep_e] = solve_oscillating(sampler, g, eps, tol);
        auto [u0, rep_0] = solve_effective(pt, g, q_plus, q_minus, tol);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();

        ConvergenceRow row;
        row.eps = eps;
        row.n = n;
        row.iterations = rep_e.iterations + rep_0.iterations;
        row.seconds = secs;
        double l2 = 0.0;
        for (long idx = 0; idx < g.num_nodes; ++idx) {
            Eigen::VectorXd x = g.coords(idx);
            double diff = std::abs(ue[idx] - u0[idx]);
            l2 += diff * diff;
            row.linf = std::max(row.linf, diff);
            bool interior = true;
            for (int k = 0; k < g.d; ++k) interior = interior && std::abs(x[k]) <= 0.5 - 0.125;
            if (interior && std::abs(x[0]) >= 0.25)
                row.interior_linf = std::max(row.interior_linf, diff);
            u0_scale = std::max(u0_scale, std::abs(u0[idx]));
        }
        row.l2 = std::sqrt(l2 * g.h * g.h);
        ex.rows.push_back(row);
    }

    ex.monotone = ex.rows.size() >= 2;
    for (size_t i = 1; i < ex.rows.size(); ++i)
        ex.monotone = ex.monotone && ex.rows[i].interior_linf < ex.rows[i - 1].interior_linf;

    auto fit = [&](auto getter) {
        RateFit rf;
        std::vector<double> eps, err;
        for (const auto& r : ex.rows) {
            eps.push_back(r.eps);
            err.push_back(getter(r));
        }
        rf.overall = log_log_fit(eps, err);
        for (size_t i = 1; i < eps.size(); ++i)
            if (err[i] > 0 && err[i - 1] > 0)
                rf.pair_slopes.push_back(std::log(err[i - 1] / err[i]) /
                                         std::log(eps[i - 1] / eps[i]));
        double floor = 1e-7 * std::max(u0_scale, 1e-30);
        rf.degenerate = rf.overall.degenerate;
        if (!err.empty()) {
            bool all_floor = true;
            for (double e : err) all_floor = all_floor && e < floor;
            if (all_floor) rf.degenerate = true;
        }
        return rf;
    };
    ex.rate_l2 = fit([](const ConvergenceRow& r) { return r.l2; });
    ex.rate_linf = fit([](const ConvergenceRow& r) { return r.linf; });
    ex.rate_interior = fit([](const ConvergenceRow& r) { return r.interior_linf; });
    return ex;
}

}  // namespace imhom
