#include "imhom/interface_problem.hpp"

#include <cmath>
#include <sstream>

namespace imhom {

double cutoff_plus(double y1) { return smoothstep(y1); }
double cutoff_minus(double y1) { return smoothstep(-y1); }

Eigen::VectorXd sample_torus_on_slab(const SlabGrid& slab, const TorusGrid& torus,
                                     const Eigen::VectorXd& torus_values) {
    if (slab.d != torus.d) throw InterfaceError("sample_torus_on_slab: dimension mismatch");
    if (std::abs(slab.ht - torus.h) > 1e-14 || std::abs(slab.h1 - torus.h) > 1e-14)
        throw InterfaceError("sample_torus_on_slab: slab spacing must match the torus grid");
    double Rsteps = slab.R / slab.h1;
    if (std::abs(Rsteps - std::round(Rsteps)) > 1e-9)
        throw InterfaceError("sample_torus_on_slab: R must be a whole number of cells");
    long n = torus.n;
    long r_off = static_cast<long>(std::llround(Rsteps));

    Eigen::VectorXd out(slab.num_nodes);
    for (long idx = 0; idx < slab.num_nodes; ++idx) {
        MultiIndex mi = slab.multi(idx);
        MultiIndex ti{};
        ti[0] = static_cast<int>((((mi[0] - r_off) % n) + n) % n);
        for (int k = 1; k < slab.d; ++k)
            ti[static_cast<size_t>(k)] = static_cast<int>(mi[static_cast<size_t>(k)] % n);
        out[idx] = torus_values[torus.index(ti)];
    }
    return out;
}

FluxMatch compute_q_minus(const CellSide& plus, const CellSide& minus, double q_plus,
                          double var_tol) {
    if (q_plus <= 0.0) throw InterfaceError("q_plus must be positive");
    auto slice_stats = [](const CellSide& side, double& mean, double& rel_var) {
        const TorusGrid& g = side.grid;
        Eigen::VectorXd a11m = side.samples.a.col(0).cwiseProduct(side.measure.values);
        double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
        for (int t = 0; t < g.n; ++t) {
            double s = torus_slice_integral(g, a11m, t);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
            sum += s;
        }
        mean = sum / g.n;
        rel_var = (hi - lo) / mean;
    };
    FluxMatch fm;
    slice_stats(plus, fm.plus_integral, fm.plus_variation);
    slice_stats(minus, fm.minus_integral, fm.minus_variation);
    if (fm.plus_variation > var_tol || fm.minus_variation > var_tol) {
        std::ostringstream os;
        os << "slice integrals of a11*m vary beyond tolerance (plus " << fm.plus_variation
           << ", minus " << fm.minus_variation << ", tol " << var_tol
           << "); the conserved-flux identity does not hold on this grid";
        throw InterfaceError(os.str());
    }
    fm.q_minus = q_plus * fm.plus_integral / fm.minus_integral;
    return fm;
}

namespace {

Eigen::VectorXd slab_boundary_data(const SlabGrid& slab, const CellSide& plus,
                                   const CellSide& minus, double q_plus, double q_minus) {
    Eigen::VectorXd mp = sample_torus_on_slab(slab, plus.grid, plus.measure.values);
    Eigen::VectorXd mm = sample_torus_on_slab(slab, minus.grid, minus.measure.values);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(slab.num_nodes);
    for (long idx = 0; idx < slab.num_nodes; ++idx) {
        int lvl = slab.level(idx);
        if (lvl == 0) g[idx] = q_minus * mm[idx];
        else if (lvl == slab.n1) g[idx] = q_plus * mp[idx];
    }
    return g;
}

}  // namespace

SlabMeasure solve_slab_measure(const CoefficientSamples& cs, const SlabGrid& slab,
                               const CellSide& plus, const CellSide& minus, double q_plus,
                               double q_minus, double tol) {
    SlabMeasure sm;
    sm.grid = slab;
    SpMat S = assemble_nondiv(cs, slab, 1.0, BoundaryRows::OperatorClipped, &sm.positivity);
    SpMat M = adjoint(S);

    sm.boundary_data = slab_boundary_data(slab, plus, minus, q_plus, q_minus);
    std::vector<char> interior(static_cast<size_t>(slab.num_nodes), 1);
    for (long idx = 0; idx < slab.num_nodes; ++idx)
        if (slab.is_boundary(idx)) interior[static_cast<size_t>(idx)] = 0;

    // cutoff profile as the initial guess: the correction is the deviation
    // field itself, so refinement resolves its exponential tail
    Eigen::VectorXd mp = sample_torus_on_slab(slab, plus.grid, plus.measure.values);
    Eigen::VectorXd mm = sample_torus_on_slab(slab, minus.grid, minus.measure.values);
    Eigen::VectorXd guess(slab.num_nodes);
    for (long idx = 0; idx < slab.num_nodes; ++idx) {
        double y1 = slab.y1_of_level(slab.level(idx));
        guess[idx] = q_plus * mp[idx] * cutoff_plus(y1) + q_minus * mm[idx] * cutoff_minus(y1);
    }

    Eigen::VectorXd zero = Eigen::VectorXd::Zero(slab.num_nodes);
    auto [m, rep] = solve_with_dirichlet(M, interior, zero, sm.boundary_data, tol, &guess, 2);
    sm.values = std::move(m);
    sm.report = rep;

    // interior residual of the doubly-divergence equation, relative to scale
    Eigen::VectorXd res = M * sm.values;
    double rmax = 0.0;
    for (long idx = 0; idx < slab.num_nodes; ++idx)
        if (interior[static_cast<size_t>(idx)]) rmax = std::max(rmax, std::abs(res[idx]));
    double diag_scale = 0.0;
    for (long i = 0; i < M.rows(); ++i) diag_scale = std::max(diag_scale, std::abs(M.coeff(i, i)));
    sm.residual = rmax / std::max(1.0, diag_scale * sm.values.cwiseAbs().maxCoeff());

    sm.min_value = sm.values.minCoeff();
    sm.max_value = sm.values.maxCoeff();
    double dlo = std::numeric_limits<double>::infinity(), dhi = -dlo;
    for (long idx = 0; idx < slab.num_nodes; ++idx) {
        if (slab.is_boundary(idx)) {
            dlo = std::min(dlo, sm.boundary_data[idx]);
            dhi = std::max(dhi, sm.boundary_data[idx]);
        }
    }
    sm.data_min = dlo;
    sm.data_max = dhi;
    double range = dhi - dlo;
    double allowance = 1e-8 * range + 1e-12 * std::max(1.0, std::abs(dhi));
    sm.max_principle_margin =
        std::max(std::max(dlo - sm.min_value, sm.max_value - dhi), 0.0);
    sm.boundary_range_bounded = sm.max_principle_margin <= allowance;

    // structural guard: the solution must stay inside the one-sided measure
    // envelope [min(q+ m+, q- m-)/2, 3 max(...)/2]; a generator stencil
    // cannot produce values outside it, so an excursion means broken assembly
    double env_lo = 0.5 * std::min(q_plus * plus.measure.min_value,
                                   q_minus * minus.measure.min_value);
    double env_hi = 1.5 * std::max(q_plus * plus.measure.max_value,
                                   q_minus * minus.measure.max_value);
    if (sm.positivity.ok &&
        (sm.min_value < env_lo - allowance || sm.max_value > env_hi + allowance)) {
        std::ostringstream os;
        os << "slab measure escaped the one-sided measure envelope: solution range ["
           << sm.min_value << ", " << sm.max_value << "] vs [" << env_lo << ", " << env_hi
           << "]; the generator stencil should forbid this - broken assembly suspected";
        throw InterfaceError(os.str());
    }
    return sm;
}

DeviationField deviation_field(const CoefficientSamples& cs, const SlabMeasure& sm,
                               const CellSide& plus, const CellSide& minus, double q_plus,
                               double q_minus) {
    const SlabGrid& slab = sm.grid;
    SpMat S = assemble_nondiv(cs, slab, 1.0, BoundaryRows::OperatorClipped);
    SpMat M = adjoint(S);

    Eigen::VectorXd mp = sample_torus_on_slab(slab, plus.grid, plus.measure.values);
    Eigen::VectorXd mm = sample_torus_on_slab(slab, minus.grid, minus.measure.values);
    Eigen::VectorXd g(slab.num_nodes);
    for (long idx = 0; idx < slab.num_nodes; ++idx) {
        double y1 = slab.y1_of_level(slab.level(idx));
        g[idx] = q_plus * mp[idx] * cutoff_plus(y1) + q_minus * mm[idx] * cutoff_minus(y1);
    }

    DeviationField dv;
    dv.v = sm.values - g;
    Eigen::VectorXd Mg = M * g;
    dv.f = -Mg;
    for (long idx = 0; idx < slab.num_nodes; ++idx)
        if (slab.is_boundary(idx)) dv.f[idx] = 0.0;
    dv.f_max = dv.f.cwiseAbs().maxCoeff();

    // L^T v = f on interior rows, by linearity up to the slab-solve residual
    Eigen::VectorXd res = M * dv.v - dv.f;
    double rmax = 0.0, supmax = 0.0;
    for (long idx = 0; idx < slab.num_nodes; ++idx) {
        if (slab.is_boundary(idx)) continue;
        rmax = std::max(rmax, std::abs(res[idx]));
        double y1 = slab.y1_of_level(slab.level(idx));
        if (std::abs(y1) > 1.0 + 2.5 * slab.h1) supmax = std::max(supmax, std::abs(dv.f[idx]));
    }
    double diag_scale = 0.0;
    for (long i = 0; i < M.rows(); ++i) diag_scale = std::max(diag_scale, std::abs(M.coeff(i, i)));
    dv.identity_residual = rmax / std::max(1.0, diag_scale * g.cwiseAbs().maxCoeff());
    dv.support_defect = supmax / std::max(dv.f_max, 1e-30);
    if (dv.support_defect > 1e-6)
        throw InterfaceError("deviation source f leaks outside the interface band: relative "
                             "defect " + std::to_string(dv.support_defect));
    return dv;
}

SliceValues flux_zero_check(const SlabGrid& slab, const CoefficientSamples& cs,
                            const Eigen::VectorXd& v) {
    SliceValues sv;
    Eigen::VectorXd a11v = cs.a.col(0).cwiseProduct(v);
    for (int lvl = 0; lvl <= slab.n1; ++lvl) {
        double y1 = slab.y1_of_level(lvl);
        if (std::abs(y1) < 1.0) continue;
        double s = slice_integral(slab, a11v, lvl);
        sv.y1.push_back(y1);
        sv.value.push_back(s);
        sv.max_abs = std::max(sv.max_abs, std::abs(s));
    }
    return sv;
}

SliceValues flux_constancy(const SlabGrid& slab, const CoefficientSamples& cs,
                           const Eigen::VectorXd& m_R) {
    SliceValues sv;
    Eigen::VectorXd a11m = cs.a.col(0).cwiseProduct(m_R);
    for (int lvl = 0; lvl <= slab.n1; ++lvl) {
        sv.y1.push_back(slab.y1_of_level(lvl));
        sv.value.push_back(slice_integral(slab, a11m, lvl));
    }
    for (double x : sv.value) sv.max_abs = std::max(sv.max_abs, std::abs(x));
    return sv;
}

DecayFit decay_fit(const SlabGrid& slab, const Eigen::VectorXd& v, Side side, double window_lo,
                   double window_hi) {
    DecayFit df;
    df.window_lo = window_lo;
    df.window_hi = window_hi;
    if (window_lo < 2.0 - 1e-12 || window_hi > slab.R - 2.0 + 1e-12 || window_lo >= window_hi)
        throw InterfaceError("decay window must lie within [2, R-2]");

    std::vector<Eigen::VectorXd> grads;
    for (int k = 0; k < slab.d; ++k) grads.push_back(centered_diff(slab, v, k));

    for (int lvl = 0; lvl <= slab.n1; ++lvl) {
        double y1 = slab.y1_of_level(lvl);
        double t = side == Side::plus ? y1 : -y1;
        if (t < window_lo - 1e-12 || t > window_hi + 1e-12) continue;
        double sv = 0.0, sg = 0.0;
        for (long j = lvl * slab.slice_size; j < (lvl + 1) * slab.slice_size; ++j) {
            sv = std::max(sv, std::abs(v[j]));
            for (const auto& gr : grads) sg = std::max(sg, std::abs(gr[j]));
        }
        df.y1.push_back(t);
        df.sup_v.push_back(sv);
        df.sup_grad_v.push_back(sg);
    }

    const double floor = 100.0 * std::numeric_limits<double>::epsilon();
    df.value_fit = exp_decay_fit(df.y1, df.sup_v, floor);
    df.gradient_fit = exp_decay_fit(df.y1, df.sup_grad_v, floor);
    df.accepted = !df.value_fit.degenerate && df.value_fit.rate > 0.0 &&
                  df.value_fit.r_squared >= 0.98;
    return df;
}

InterfaceFluxCorrector interface_flux_corrector(const CoefficientSamples& cs,
                                                const SlabMeasure& sm, const CellSide& plus,
                                                const CellSide& minus, double q_plus,
                                                double q_minus) {
    const SlabGrid& slab = sm.grid;
    if (slab.d != 2)
        throw InterfaceError("interface flux corrector is implemented for d = 2 only");
    const long N = slab.num_nodes;

    // slab transformed drift: btilde_i = b_i m - d_j (a_ij m)
    Eigen::MatrixXd atil(N, 4);
    for (int c = 0; c < 4; ++c) atil.col(c) = cs.a.col(c).cwiseProduct(sm.values);
    InterfaceFluxCorrector fc;
    fc.btilde.resize(N, 2);
    for (int i = 0; i < 2; ++i) {
        Eigen::VectorXd bi = cs.b.col(i).cwiseProduct(sm.values);
        for (int j = 0; j < 2; ++j) bi -= centered_diff(slab, atil.col(i * 2 + j), j);
        fc.btilde.col(i) = bi;
    }

    // per-slice transverse mean of btilde_1 must vanish (flux constancy)
    double mean_defect = 0.0;
    for (int lvl = 0; lvl <= slab.n1; ++lvl)
        mean_defect = std::max(mean_defect, std::abs(slice_integral(slab, fc.btilde.col(0), lvl)));
    fc.slice_mean_defect = mean_defect;
    double scale = std::max(1.0, atil.cwiseAbs().maxCoeff());
    if (mean_defect > 1000.0 * slab.ht * slab.ht * scale)
        throw InterfaceError(
            "interface flux corrector: per-slice mean of btilde_1 fails the flux-constancy "
            "compatibility check (defect " + std::to_string(mean_defect) + ")");

    // stream function: integrate btilde_1 along y2 per slice (removing the
    // tiny slice mean so the cumulative sum closes), then fix slice
    // constants by integrating the slice mean of -btilde_2 in y1, anchored
    // mean-zero at y1 = 0.
    const long S = slab.slice_size;
    fc.psi.resize(N);
    std::vector<double> slice_mean_b2(static_cast<size_t>(slab.n1 + 1));
    for (int lvl = 0; lvl <= slab.n1; ++lvl) {
        long base = lvl * S;
        double mean_b1 = fc.btilde.col(0).segment(base, S).mean();
        double acc = 0.0;
        double prev = fc.btilde(base, 0) - mean_b1;
        fc.psi[base] = 0.0;
        for (long j = 1; j < S; ++j) {
            double cur = fc.btilde(base + j, 0) - mean_b1;
            acc += 0.5 * (prev + cur) * slab.ht;
            fc.psi[base + j] = acc;
            prev = cur;
        }
        double m = fc.psi.segment(base, S).mean();
        fc.psi.segment(base, S).array() -= m;
        slice_mean_b2[static_cast<size_t>(lvl)] = fc.btilde.col(1).segment(base, S).mean();
    }
    int lvl0 = static_cast<int>(std::llround(slab.R / slab.h1));  // y1 = 0 level
    std::vector<double> psi_bar(static_cast<size_t>(slab.n1 + 1), 0.0);
    for (int lvl = lvl0 + 1; lvl <= slab.n1; ++lvl)
        psi_bar[static_cast<size_t>(lvl)] =
            psi_bar[static_cast<size_t>(lvl - 1)] -
            0.5 * (slice_mean_b2[static_cast<size_t>(lvl - 1)] + slice_mean_b2[static_cast<size_t>(lvl)]) *
                slab.h1;
    for (int lvl = lvl0 - 1; lvl >= 0; --lvl)
        psi_bar[static_cast<size_t>(lvl)] =
            psi_bar[static_cast<size_t>(lvl + 1)] +
            0.5 * (slice_mean_b2[static_cast<size_t>(lvl + 1)] + slice_mean_b2[static_cast<size_t>(lvl)]) *
                slab.h1;
    for (int lvl = 0; lvl <= slab.n1; ++lvl)
        fc.psi.segment(lvl * S, S).array() += psi_bar[static_cast<size_t>(lvl)];

    // residuals of the defining relations (interior levels only; the slab
    // ends use one-sided differences and sit outside every fit window)
    Eigen::VectorXd d1psi = centered_diff(slab, fc.psi, 0);
    Eigen::VectorXd d2psi = centered_diff(slab, fc.psi, 1);
    for (int lvl = 1; lvl < slab.n1; ++lvl)
        for (long j = lvl * S; j < (lvl + 1) * S; ++j) {
            fc.curl_residual = std::max(fc.curl_residual, std::abs(d1psi[j] + fc.btilde(j, 1)));
            fc.grad_residual = std::max(fc.grad_residual, std::abs(d2psi[j] - fc.btilde(j, 0)));
        }

    // matching constants: phi_btilde(1,0) = Psi vs q times the one-sided
    // phi(1,0) = -phi01; M fitted as the median offset over the outer
    // quarter of each side, then the decay of the matched difference.
    auto match_side = [&](const CellSide& side, double q, Side which, Eigen::MatrixXd& M_out,
                          ExpFit& fit_out) {
        Eigen::VectorXd phi01 = sample_torus_on_slab(slab, side.grid, side.phi.upper[0]);
        Eigen::VectorXd diff(N);  // phi_btilde,21 - q phi_side,21
        for (long j = 0; j < N; ++j) diff[j] = fc.psi[j] - q * (-phi01[j]);

        std::vector<double> tail;
        double tail_lo = slab.R - (slab.R - 1.0) / 4.0;
        for (long j = 0; j < N; ++j) {
            double y1 = slab.y1_of_level(slab.level(j));
            double t = which == Side::plus ? y1 : -y1;
            if (t >= tail_lo && t <= slab.R - 2.0 * slab.h1) tail.push_back(diff[j]);
        }
        std::sort(tail.begin(), tail.end());
        double med = tail.empty() ? 0.0 : tail[tail.size() / 2];
        double m21 = -med;  // |phi_btilde - q phi + M| -> 0
        M_out.setZero(2, 2);
        M_out(1, 0) = m21;
        M_out(0, 1) = -m21;

        std::vector<double> ts, norms;
        for (int lvl = 0; lvl <= slab.n1; ++lvl) {
            double y1 = slab.y1_of_level(lvl);
            double t = which == Side::plus ? y1 : -y1;
            if (t < 2.0 || t > slab.R - 2.0) continue;
            double s = 0.0;
            for (long j = lvl * S; j < (lvl + 1) * S; ++j)
                s = std::max(s, std::abs(diff[j] + m21));
            ts.push_back(t);
            norms.push_back(s);
        }
        fit_out = exp_decay_fit(ts, norms, 100.0 * std::numeric_limits<double>::epsilon());
    };
    match_side(plus, q_plus, Side::plus, fc.M_plus, fc.match_plus);
    match_side(minus, q_minus, Side::minus, fc.M_minus, fc.match_minus);
    return fc;
}

}  // namespace imhom
