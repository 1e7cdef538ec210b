#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

#include "imhom/fields.hpp"

namespace imhom {

struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxDim = 4;
using MultiIndex = std::array<int, kMaxDim>;

// Uniform grid on the unit torus [0,1)^d, n nodes per axis, h = 1/n.
// Node order: axis 0 slowest, last axis fastest.
struct TorusGrid {
    int d = 2;
    int n = 0;
    double h = 0.0;
    long num_nodes = 0;

    static TorusGrid make(int d, int n);

    long index(const MultiIndex& mi) const {
        long idx = 0;
        for (int k = 0; k < d; ++k) idx = idx * n + mi[static_cast<size_t>(k)];
        return idx;
    }
    MultiIndex multi(long idx) const {
        MultiIndex mi{};
        for (int k = d - 1; k >= 0; --k) {
            mi[static_cast<size_t>(k)] = static_cast<int>(idx % n);
            idx /= n;
        }
        return mi;
    }
    // Periodic shift along one axis by any number of nodes.
    long shift(long idx, int axis, int step) const {
        MultiIndex mi = multi(idx);
        int& c = mi[static_cast<size_t>(axis)];
        c = ((c + step) % n + n) % n;
        return index(mi);
    }
    Eigen::VectorXd coords(long idx) const {
        MultiIndex mi = multi(idx);
        Eigen::VectorXd y(d);
        for (int k = 0; k < d; ++k) y[k] = h * mi[static_cast<size_t>(k)];
        return y;
    }
    double cell_volume() const {
        double v = 1.0;
        for (int k = 0; k < d; ++k) v *= h;
        return v;
    }
};

// Grid on the truncated slab (-R,R) x T^{d-1}. Axis 0 runs over n1 intervals
// with the end levels y1 = -R and y1 = +R on nodes; transverse axes are
// periodic with nt nodes and spacing 1/nt. The interface edges y1 = +-1 must
// land on nodes so interface sources are resolved exactly.
struct SlabGrid {
    int d = 2;
    double R = 0.0;
    int n1 = 0;   // intervals along y1; n1+1 levels
    int nt = 0;   // transverse nodes per axis
    double h1 = 0.0, ht = 0.0;
    long num_nodes = 0;
    long slice_size = 0;  // nt^{d-1}

    static SlabGrid make(int d, double R, int n1, int nt);
    // Interface-pipeline grid: integer R, h1 = ht = 1/nt, so every slab node
    // projects onto a torus node of an nt-per-axis cell grid.
    static SlabGrid interface_grid(int d, int R, int nt);

    int level(long idx) const { return static_cast<int>(idx / slice_size); }
    bool is_boundary(long idx) const {
        int i0 = level(idx);
        return i0 == 0 || i0 == n1;
    }
    double y1_of_level(int i0) const { return -R + h1 * i0; }

    long index(const MultiIndex& mi) const {
        long idx = mi[0];
        for (int k = 1; k < d; ++k) idx = idx * nt + mi[static_cast<size_t>(k)];
        return idx;
    }
    MultiIndex multi(long idx) const {
        MultiIndex mi{};
        for (int k = d - 1; k >= 1; --k) {
            mi[static_cast<size_t>(k)] = static_cast<int>(idx % nt);
            idx /= nt;
        }
        mi[0] = static_cast<int>(idx);
        return mi;
    }
    // Shift along an axis; transverse axes wrap, axis 0 returns -1 when the
    // step leaves the slab.
    long shift(long idx, int axis, int step) const {
        MultiIndex mi = multi(idx);
        if (axis == 0) {
            int i0 = mi[0] + step;
            if (i0 < 0 || i0 > n1) return -1;
            mi[0] = i0;
        } else {
            int& c = mi[static_cast<size_t>(axis)];
            c = ((c + step) % nt + nt) % nt;
        }
        return index(mi);
    }
    Eigen::VectorXd coords(long idx) const {
        MultiIndex mi = multi(idx);
        Eigen::VectorXd y(d);
        y[0] = y1_of_level(mi[0]);
        for (int k = 1; k < d; ++k) y[k] = ht * mi[static_cast<size_t>(k)];
        return y;
    }
    double spacing(int axis) const { return axis == 0 ? h1 : ht; }
    double transverse_cell_volume() const {
        double v = 1.0;
        for (int k = 1; k < d; ++k) v *= ht;
        return v;
    }
};

struct TorusField {
    TorusGrid grid;
    Eigen::VectorXd values;
};

struct SlabField {
    SlabGrid grid;
    Eigen::VectorXd values;
};

// Quadrature mean over the unit torus (rectangle rule; exact for the
// trapezoid by periodicity).
double quadrature_mean(const TorusGrid& g, const Eigen::VectorXd& v);

// Transverse-torus quadrature of f over the slice at the given y1 level.
double slice_integral(const SlabGrid& g, const Eigen::VectorXd& v, int level);

// Same on the torus: integral over {y1 = level*h} x T^{d-1}.
double torus_slice_integral(const TorusGrid& g, const Eigen::VectorXd& v, int level);

// Centered difference along an axis; periodic wrap on the torus.
Eigen::VectorXd centered_diff(const TorusGrid& g, const Eigen::VectorXd& v, int axis);
// On the slab: centered in the interior, one-sided at the y1 ends.
Eigen::VectorXd centered_diff(const SlabGrid& g, const Eigen::VectorXd& v, int axis);

// Pointwise coefficient samples at grid nodes, row-major a entries.
struct CoefficientSamples {
    int d = 2;
    long num_nodes = 0;
    Eigen::MatrixXd a;  // num_nodes x d*d
    Eigen::MatrixXd b;  // num_nodes x d

    double a_at(long node, int i, int j) const { return a(node, i * d + j); }
    double b_at(long node, int i) const { return b(node, i); }
};

CoefficientSamples sample(const PeriodicCoefficients& pc, const TorusGrid& g);
CoefficientSamples sample(const CoefficientField& f, const SlabGrid& g);

}  // namespace imhom
