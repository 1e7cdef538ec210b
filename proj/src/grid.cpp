#include "imhom/grid.hpp"

#include <cmath>

namespace imhom {

TorusGrid TorusGrid::make(int d, int n) {
    if (d < 2 || d > kMaxDim) throw GridError("torus grid: dimension must be in [2,4]");
    if (n < 4) throw GridError("torus grid: need at least 4 nodes per axis");
    TorusGrid g;
    g.d = d;
    g.n = n;
    g.h = 1.0 / n;
    g.num_nodes = 1;
    for (int k = 0; k < d; ++k) g.num_nodes *= n;
    return g;
}

SlabGrid SlabGrid::make(int d, double R, int n1, int nt) {
    if (d < 2 || d > kMaxDim) throw GridError("slab grid: dimension must be in [2,4]");
    if (R <= 1.0) throw GridError("slab grid: R must exceed 1");
    if (n1 < 4 || nt < 4) throw GridError("slab grid: too few nodes");
    SlabGrid g;
    g.d = d;
    g.R = R;
    g.n1 = n1;
    g.nt = nt;
    g.h1 = 2.0 * R / n1;
    g.ht = 1.0 / nt;
    // +-1 must be grid levels
    for (double edge : {R - 1.0, R + 1.0}) {
        double steps = edge / g.h1;
        if (std::abs(steps - std::round(steps)) > 1e-9)
            throw GridError("slab grid: interface edges y1=+-1 must land on grid nodes");
    }
    g.slice_size = 1;
    for (int k = 1; k < d; ++k) g.slice_size *= nt;
    g.num_nodes = (n1 + 1) * g.slice_size;
    return g;
}

SlabGrid SlabGrid::interface_grid(int d, int R, int nt) {
    if (R < 3) throw GridError("interface slab: R must be an integer > 2");
    return make(d, static_cast<double>(R), 2 * R * nt, nt);
}

double quadrature_mean(const TorusGrid& g, const Eigen::VectorXd& v) {
    return v.sum() * g.cell_volume();
}

double slice_integral(const SlabGrid& g, const Eigen::VectorXd& v, int level) {
    if (level < 0 || level > g.n1) throw GridError("slice index out of range");
    return v.segment(level * g.slice_size, g.slice_size).sum() * g.transverse_cell_volume();
}

double torus_slice_integral(const TorusGrid& g, const Eigen::VectorXd& v, int level) {
    if (level < 0 || level >= g.n) throw GridError("slice index out of range");
    long slice = g.num_nodes / g.n;
    double vol = 1.0;
    for (int k = 1; k < g.d; ++k) vol *= g.h;
    return v.segment(level * slice, slice).sum() * vol;
}

Eigen::VectorXd centered_diff(const TorusGrid& g, const Eigen::VectorXd& v, int axis) {
    Eigen::VectorXd out(g.num_nodes);
    double inv2h = 1.0 / (2.0 * g.h);
    for (long idx = 0; idx < g.num_nodes; ++idx)
        out[idx] = (v[g.shift(idx, axis, +1)] - v[g.shift(idx, axis, -1)]) * inv2h;
    return out;
}

Eigen::VectorXd centered_diff(const SlabGrid& g, const Eigen::VectorXd& v, int axis) {
    Eigen::VectorXd out(g.num_nodes);
    double h = g.spacing(axis);
    double inv2h = 1.0 / (2.0 * h);
    for (long idx = 0; idx < g.num_nodes; ++idx) {
        long p = g.shift(idx, axis, +1);
        long m = g.shift(idx, axis, -1);
        if (p >= 0 && m >= 0) {
            out[idx] = (v[p] - v[m]) * inv2h;
        } else if (p < 0) {
            // one-sided second-order at the top end
            long m2 = g.shift(idx, axis, -2);
            out[idx] = (3.0 * v[idx] - 4.0 * v[m] + v[m2]) / (2.0 * h);
        } else {
            long p2 = g.shift(idx, axis, +2);
            out[idx] = (-3.0 * v[idx] + 4.0 * v[p] - v[p2]) / (2.0 * h);
        }
    }
    return out;
}

CoefficientSamples sample(const PeriodicCoefficients& pc, const TorusGrid& g) {
    CoefficientSamples s;
    s.d = g.d;
    s.num_nodes = g.num_nodes;
    s.a.resize(g.num_nodes, g.d * g.d);
    s.b.resize(g.num_nodes, g.d);
    for (long idx = 0; idx < g.num_nodes; ++idx) {
        Eigen::VectorXd y = g.coords(idx);
        Eigen::MatrixXd A = pc.eval_a(y);
        for (int i = 0; i < g.d; ++i)
            for (int j = 0; j < g.d; ++j) s.a(idx, i * g.d + j) = A(i, j);
        s.b.row(idx) = pc.eval_b(y).transpose();
    }
    return s;
}

CoefficientSamples sample(const CoefficientField& f, const SlabGrid& g) {
    CoefficientSamples s;
    s.d = g.d;
    s.num_nodes = g.num_nodes;
    s.a.resize(g.num_nodes, g.d * g.d);
    s.b.resize(g.num_nodes, g.d);
    for (long idx = 0; idx < g.num_nodes; ++idx) {
        Eigen::VectorXd y = g.coords(idx);
        Eigen::MatrixXd A = f.eval_a(y);
        for (int i = 0; i < g.d; ++i)
            for (int j = 0; j < g.d; ++j) s.a(idx, i * g.d + j) = A(i, j);
        s.b.row(idx) = f.eval_b(y).transpose();
    }
    return s;
}

}  // namespace imhom
