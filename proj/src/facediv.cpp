#include "imhom/facediv.hpp"

#include <cmath>

namespace imhom {

namespace {

// Face-flux stencil on the torus: flux through the face (x, x+e_axis) of the
// field u, as weights on nearby nodes. cb(node, beta) = B(node, axis*d+beta).
struct FaceWeights {
    long cols[10];
    double w[10];
    int count = 0;
    void add(long c, double v) {
        cols[count] = c;
        w[count] = v;
        ++count;
    }
};

FaceWeights face_flux_weights_torus(const TorusGrid& g, const Eigen::MatrixXd& B, long node,
                                    int axis) {
    FaceWeights fw;
    int d = g.d;
    long nb = g.shift(node, axis, +1);
    double h = g.h;
    auto Bface = [&](int beta) { return 0.5 * (B(node, axis * d + beta) + B(nb, axis * d + beta)); };
    // normal part
    double bn = Bface(axis) / h;
    fw.add(nb, bn);
    fw.add(node, -bn);
    // transverse parts: average of the centered differences at the two nodes
    for (int beta = 0; beta < d; ++beta) {
        if (beta == axis) continue;
        double bt = Bface(beta) / (4.0 * h);
        if (bt == 0.0) continue;
        fw.add(g.shift(node, beta, +1), bt);
        fw.add(g.shift(node, beta, -1), -bt);
        fw.add(g.shift(nb, beta, +1), bt);
        fw.add(g.shift(nb, beta, -1), -bt);
    }
    return fw;
}

}  // namespace

SpMat assemble_face_div_torus(const TorusGrid& g, const Eigen::MatrixXd& B) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(g.num_nodes) * g.d * 12);
    double h = g.h;
    for (long node = 0; node < g.num_nodes; ++node) {
        for (int axis = 0; axis < g.d; ++axis) {
            FaceWeights fw = face_flux_weights_torus(g, B, node, axis);
            long nb = g.shift(node, axis, +1);
            // div contribution: +flux/h at node, -flux/h at the upper neighbor
            for (int k = 0; k < fw.count; ++k) {
                trip.emplace_back(node, fw.cols[k], fw.w[k] / h);
                trip.emplace_back(nb, fw.cols[k], -fw.w[k] / h);
            }
        }
    }
    SpMat K(g.num_nodes, g.num_nodes);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    return K;
}

Eigen::VectorXd corrector_rhs_torus(const TorusGrid& g, const Eigen::MatrixXd& B, int k) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g.num_nodes);
    int d = g.d;
    double h = g.h;
    for (long node = 0; node < g.num_nodes; ++node) {
        for (int axis = 0; axis < d; ++axis) {
            long nb = g.shift(node, axis, +1);
            double flux = 0.5 * (B(node, axis * d + k) + B(nb, axis * d + k));
            rhs[node] -= flux / h;
            rhs[nb] += flux / h;
        }
    }
    return rhs;
}

Eigen::VectorXd face_flux_average(const TorusGrid& g, const Eigen::MatrixXd& B,
                                  const Eigen::VectorXd& chi, int k) {
    int d = g.d;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
    for (long node = 0; node < g.num_nodes; ++node) {
        for (int axis = 0; axis < d; ++axis) {
            FaceWeights fw = face_flux_weights_torus(g, B, node, axis);
            double flux = 0.0;
            for (int t = 0; t < fw.count; ++t) flux += fw.w[t] * chi[fw.cols[t]];
            long nb = g.shift(node, axis, +1);
            flux += 0.5 * (B(node, axis * d + k) + B(nb, axis * d + k));  // + B e_k at face
            acc[axis] += flux;
        }
    }
    return acc * g.cell_volume();
}

Eigen::VectorXd node_flux_average(const TorusGrid& g, const Eigen::MatrixXd& B,
                                  const Eigen::VectorXd& chi, int k) {
    int d = g.d;
    std::vector<Eigen::VectorXd> grad(static_cast<size_t>(d));
    for (int beta = 0; beta < d; ++beta) grad[static_cast<size_t>(beta)] = centered_diff(g, chi, beta);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
    for (long node = 0; node < g.num_nodes; ++node)
        for (int i = 0; i < d; ++i) {
            double s = B(node, i * d + k);
            for (int beta = 0; beta < d; ++beta)
                s += B(node, i * d + beta) * grad[static_cast<size_t>(beta)][node];
            acc[i] += s;
        }
    return acc * g.cell_volume();
}

DomainGrid DomainGrid::make(int d, int n) {
    if (d < 2 || d > kMaxDim) throw GridError("domain grid: dimension must be in [2,4]");
    if (n < 4) throw GridError("domain grid: need at least 4 cells per axis");
    DomainGrid g;
    g.d = d;
    g.n = n;
    g.h = 1.0 / n;
    g.num_nodes = 1;
    for (int k = 0; k < d; ++k) g.num_nodes *= n;
    return g;
}

namespace {

// Ghost odd reflection across the Dirichlet boundary: coordinate -1 maps to
// node 0 with sign -1, coordinate n maps to n-1 with sign -1.
bool ghost_lookup(const DomainGrid& g, MultiIndex mi, long& node, double& sign) {
    sign = 1.0;
    for (int k = 0; k < g.d; ++k) {
        int& c = mi[static_cast<size_t>(k)];
        if (c == -1) {
            c = 0;
            sign = -sign;
        } else if (c == g.n) {
            c = g.n - 1;
            sign = -sign;
        } else if (c < -1 || c > g.n) {
            return false;
        }
    }
    node = g.index(mi);
    return true;
}

struct DomainFace {
    // face between cell mi and mi+e_axis; mi[axis] runs -1..n-1 where -1 and
    // n-1 give the two boundary faces
    int axis;
    MultiIndex lo;
};

template <typename Emit>
void domain_face_flux(const DomainGrid& g, const FaceTensor& B, const DomainFace& f,
                      const Emit& emit) {
    int d = g.d;
    double h = g.h;
    MultiIndex hi = f.lo;
    hi[static_cast<size_t>(f.axis)] += 1;

    Eigen::VectorXd center(d);
    for (int k = 0; k < d; ++k)
        center[k] = -0.5 + (f.lo[static_cast<size_t>(k)] + 0.5) * h;
    center[f.axis] += 0.5 * h;  // midpoint between the two cells

    Eigen::MatrixXd Bf = B(f.axis, center);

    bool lo_bnd = f.lo[static_cast<size_t>(f.axis)] < 0;
    bool hi_bnd = hi[static_cast<size_t>(f.axis)] >= g.n;

    auto emit_mi = [&](MultiIndex mi, double w) {
        long node;
        double sign;
        if (ghost_lookup(g, mi, node, sign) && w != 0.0) emit(node, sign * w);
    };

    // normal difference
    double bn = Bf(f.axis, f.axis) / h;
    emit_mi(hi, bn);
    emit_mi(f.lo, -bn);

    // transverse averaged gradients; on boundary faces the tangential
    // derivative of u vanishes (u = 0 along the face), so skip them there
    if (!lo_bnd && !hi_bnd) {
        for (int beta = 0; beta < d; ++beta) {
            if (beta == f.axis) continue;
            double bt = Bf(f.axis, beta) / (4.0 * h);
            if (bt == 0.0) continue;
            for (const MultiIndex& base : {f.lo, hi}) {
                MultiIndex p = base, m = base;
                p[static_cast<size_t>(beta)] += 1;
                m[static_cast<size_t>(beta)] -= 1;
                emit_mi(p, bt);
                emit_mi(m, -bt);
            }
        }
    }
}

template <typename PerFace>
void for_each_domain_face(const DomainGrid& g, const PerFace& fn) {
    for (int axis = 0; axis < g.d; ++axis) {
        // iterate lo over the extended range including the ghost level -1
        long count = 1;
        for (int k = 0; k < g.d; ++k) count *= (k == axis ? g.n + 1 : g.n);
        for (long t = 0; t < count; ++t) {
            long rest = t;
            MultiIndex lo{};
            for (int k = g.d - 1; k >= 0; --k) {
                int range = (k == axis ? g.n + 1 : g.n);
                lo[static_cast<size_t>(k)] = static_cast<int>(rest % range);
                rest /= range;
            }
            lo[static_cast<size_t>(axis)] -= 1;  // -1 .. n-1
            fn(DomainFace{axis, lo});
        }
    }
}

}  // namespace

SpMat assemble_face_div_domain(const DomainGrid& g, const FaceTensor& B) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(g.num_nodes) * g.d * 14);
    double h = g.h;
    for_each_domain_face(g, [&](const DomainFace& f) {
        MultiIndex hi = f.lo;
        hi[static_cast<size_t>(f.axis)] += 1;
        bool lo_in = f.lo[static_cast<size_t>(f.axis)] >= 0;
        bool hi_in = hi[static_cast<size_t>(f.axis)] < g.n;
        long lo_node = lo_in ? g.index(f.lo) : -1;
        long hi_node = hi_in ? g.index(hi) : -1;
        domain_face_flux(g, B, f, [&](long col, double w) {
            if (lo_in) trip.emplace_back(lo_node, col, w / h);
            if (hi_in) trip.emplace_back(hi_node, col, -w / h);
        });
    });
    SpMat K(g.num_nodes, g.num_nodes);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    return K;
}

double face_energy_domain(const DomainGrid& g, const FaceTensor& B, const Eigen::VectorXd& u) {
    // sum over faces of (B grad u)_n * (normal difference of u), the discrete
    // form of int B grad u . grad u (ghost values included)
    double acc = 0.0;
    double h = g.h;
    for_each_domain_face(g, [&](const DomainFace& f) {
        double flux = 0.0;
        domain_face_flux(g, B, f, [&](long col, double w) { flux += w * u[col]; });
        MultiIndex hi = f.lo;
        hi[static_cast<size_t>(f.axis)] += 1;
        long node;
        double sign;
        double u_hi = ghost_lookup(g, hi, node, sign) ? sign * u[node] : 0.0;
        double u_lo = ghost_lookup(g, MultiIndex(f.lo), node, sign) ? sign * u[node] : 0.0;
        acc += flux * (u_hi - u_lo) / h;
    });
    double vol = 1.0;
    for (int k = 0; k < g.d; ++k) vol *= h;
    return acc * vol;
}

}  // namespace imhom
