#pragma once

#include <functional>

#include "imhom/stencil.hpp"

namespace imhom {

// Conservative face-flux discretization of div(B grad u) for a full (possibly
// nonsymmetric) tensor B: normal differences on half-step faces, transverse
// gradients averaged from the two adjacent nodes, coefficients arithmetic-
// averaged to faces. Exactly conservative: row and column sums vanish on the
// torus.
SpMat assemble_face_div_torus(const TorusGrid& g, const Eigen::MatrixXd& B);

// rhs of the corrector problem: -div(B e_k) by face differences.
Eigen::VectorXd corrector_rhs_torus(const TorusGrid& g, const Eigen::MatrixXd& B, int k);

// Cell average of B(grad chi + e_k) via the face fluxes (the averaging
// formula for the homogenized tensor); returns a d-vector = A_hat e_k.
Eigen::VectorXd face_flux_average(const TorusGrid& g, const Eigen::MatrixXd& B,
                                  const Eigen::VectorXd& chi, int k);

// Node-based alternative: cell average of B (grad_c chi + e_k) with centered
// node gradients; agrees with the face route to O(h^2).
Eigen::VectorXd node_flux_average(const TorusGrid& g, const Eigen::MatrixXd& B,
                                  const Eigen::VectorXd& chi, int k);

// Cell-centered grid on the box (-1/2,1/2)^d with homogeneous Dirichlet data
// on the boundary faces (ghost odd reflection).
struct DomainGrid {
    int d = 2;
    int n = 0;  // cells per axis
    double h = 0.0;
    long num_nodes = 0;

    static DomainGrid make(int d, int n);

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
    Eigen::VectorXd coords(long idx) const {
        MultiIndex mi = multi(idx);
        Eigen::VectorXd x(d);
        for (int k = 0; k < d; ++k) x[k] = -0.5 + (mi[static_cast<size_t>(k)] + 0.5) * h;
        return x;
    }
};

// Tensor at a face: axis = face normal, center = face midpoint.
using FaceTensor = std::function<Eigen::MatrixXd(int axis, const Eigen::VectorXd& center)>;

SpMat assemble_face_div_domain(const DomainGrid& g, const FaceTensor& B);

// Discrete energy sum_faces (B grad u . grad u) h^d with the same face
// gradients and ghost treatment as the assembly.
double face_energy_domain(const DomainGrid& g, const FaceTensor& B, const Eigen::VectorXd& u);

}  // namespace imhom
