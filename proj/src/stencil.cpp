#include "imhom/stencil.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

namespace imhom {

std::string PositivityReport::message() const {
    if (ok) return "stencil positivity holds at every node";
    std::ostringstream os;
    os << "stencil positivity violated at " << violations << " node(s); worst margin "
       << worst_margin << " at node " << worst_node << " axis " << worst_axis + 1 << "; ";
    if (suggested_h > 0.0)
        os << "suggest h <= " << suggested_h;
    else
        os << "mixed-derivative dominance, refinement alone cannot restore positivity";
    return os.str();
}

namespace {

// Shared assembly core. shift(idx, axis, step) returns -1 for dropped
// (out-of-domain) neighbors.
template <typename ShiftFn, typename SpacingFn>
void assemble_rows(const CoefficientSamples& cs, long num_nodes, int d, double drift_scale,
                   const ShiftFn& shift, const SpacingFn& spacing,
                   const std::vector<char>& stencil_row, std::vector<Eigen::Triplet<double>>& trip,
                   PositivityReport* pos) {
    for (long idx = 0; idx < num_nodes; ++idx) {
        if (!stencil_row[static_cast<size_t>(idx)]) {
            trip.emplace_back(idx, idx, 1.0);
            continue;
        }
        double center = 0.0;
        for (int k = 0; k < d; ++k) {
            double hk = spacing(k);
            double diff = cs.a_at(idx, k, k) / (hk * hk);
            double drift = drift_scale * cs.b_at(idx, k) / (2.0 * hk);
            long p = shift(idx, k, +1);
            long m = shift(idx, k, -1);
            if (p >= 0) trip.emplace_back(idx, p, diff + drift);
            if (m >= 0) trip.emplace_back(idx, m, diff - drift);
            center += -2.0 * diff;

            if (pos) {
                double margin = diff;
                for (int l = 0; l < d; ++l)
                    if (l != k) margin -= std::abs(cs.a_at(idx, k, l)) / (hk * spacing(l));
                margin -= std::abs(drift);
                if (margin < 0.0) {
                    pos->ok = false;
                    ++pos->violations;
                    if (margin < pos->worst_margin) {
                        pos->worst_margin = margin;
                        pos->worst_node = idx;
                        pos->worst_axis = k;
                    }
                }
            }

            for (int l = k + 1; l < d; ++l) {
                double akl = cs.a_at(idx, k, l);
                if (akl == 0.0) continue;
                double w = akl / (2.0 * hk * spacing(l));
                long pp = (p >= 0) ? shift(p, l, +1) : -1;
                long pm = (p >= 0) ? shift(p, l, -1) : -1;
                long mp = (m >= 0) ? shift(m, l, +1) : -1;
                long mm = (m >= 0) ? shift(m, l, -1) : -1;
                if (pp >= 0) trip.emplace_back(idx, pp, w);
                if (pm >= 0) trip.emplace_back(idx, pm, -w);
                if (mp >= 0) trip.emplace_back(idx, mp, -w);
                if (mm >= 0) trip.emplace_back(idx, mm, w);
            }
        }
        trip.emplace_back(idx, idx, center);
    }
}

// Refinement suggestion: with uniform scaling h -> alpha h the drift term is
// the only one that gains, so solve the worst node's margin for h.
void finish_positivity(const CoefficientSamples& cs, double drift_scale,
                       const std::function<double(int)>& spacing, PositivityReport* pos, int d) {
    if (!pos || pos->ok || pos->worst_node < 0) return;
    long idx = pos->worst_node;
    int k = pos->worst_axis;
    double hk = spacing(k);
    double mixed = 0.0;
    for (int l = 0; l < d; ++l)
        if (l != k) mixed += std::abs(cs.a_at(idx, k, l)) * (hk / spacing(l));
    double diff_part = cs.a_at(idx, k, k) - mixed;  // units of 1/h^2 after /hk^2
    double drift = std::abs(drift_scale * cs.b_at(idx, k));
    if (diff_part > 0.0 && drift > 0.0)
        pos->suggested_h = 2.0 * diff_part / drift;
    else
        pos->suggested_h = 0.0;
}

}  // namespace

SpMat assemble_nondiv(const CoefficientSamples& cs, const TorusGrid& g, double drift_scale,
                      PositivityReport* positivity) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(g.num_nodes) * (2 * g.d * g.d + 1));
    std::vector<char> stencil_row(static_cast<size_t>(g.num_nodes), 1);
    auto shift = [&g](long idx, int axis, int step) { return g.shift(idx, axis, step); };
    auto spacing = [&g](int) { return g.h; };
    assemble_rows(cs, g.num_nodes, g.d, drift_scale, shift, spacing, stencil_row, trip, positivity);
    finish_positivity(cs, drift_scale, spacing, positivity, g.d);
    SpMat L(g.num_nodes, g.num_nodes);
    L.setFromTriplets(trip.begin(), trip.end());
    L.makeCompressed();
    return L;
}

SpMat assemble_nondiv(const CoefficientSamples& cs, const SlabGrid& g, double drift_scale,
                      BoundaryRows rows, PositivityReport* positivity) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(g.num_nodes) * (2 * g.d * g.d + 1));
    std::vector<char> stencil_row(static_cast<size_t>(g.num_nodes), 1);
    if (rows == BoundaryRows::Identity)
        for (long idx = 0; idx < g.num_nodes; ++idx)
            if (g.is_boundary(idx)) stencil_row[static_cast<size_t>(idx)] = 0;
    auto shift = [&g](long idx, int axis, int step) { return g.shift(idx, axis, step); };
    auto spacing = [&g](int axis) { return g.spacing(axis); };
    assemble_rows(cs, g.num_nodes, g.d, drift_scale, shift, spacing, stencil_row, trip, positivity);
    finish_positivity(cs, drift_scale, spacing, positivity, g.d);
    SpMat L(g.num_nodes, g.num_nodes);
    L.setFromTriplets(trip.begin(), trip.end());
    L.makeCompressed();
    return L;
}

SpMat adjoint(const SpMat& Lh) {
    SpMat t = Lh.transpose();
    t.makeCompressed();
    return t;
}

}  // namespace imhom
