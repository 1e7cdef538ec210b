#pragma once

#include "imhom/facediv.hpp"
#include "imhom/interface_problem.hpp"

namespace imhom {

struct HomogenError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Piecewise effective tensor of the reduced problem: q+ A_hat(+) for x1 > 0,
// q- A_hat(-) for x1 < 0. The one-sided tensors are stored unscaled so they
// stay bit-identical to the cell outputs.
struct PiecewiseTensor {
    Eigen::MatrixXd plus;   // cell A_hat(+), unscaled
    Eigen::MatrixXd minus;  // cell A_hat(-), unscaled
    double q_plus = 1.0;
    double q_minus = 1.0;
    Eigen::MatrixXd at(double x1) const {
        return x1 > 0.0 ? (q_plus * plus).eval() : (q_minus * minus).eval();
    }
};

// Evaluates the slab-built coefficient B = atilde + phi_btilde and the
// measure m at arbitrary points of the plane: bilinear inside the slab,
// one-sided periodic extension (q-scaled cell fields, phi shifted by the
// matching constants M+-) beyond |y1| = R.
class SlabCoefficientSampler {
  public:
    SlabCoefficientSampler(const CoefficientField& field, const InterfaceResult& ir,
                           const CellSide& plus, const CellSide& minus);

    Eigen::MatrixXd coefficient(const Eigen::VectorXd& y) const;  // 2x2
    double measure(const Eigen::VectorXd& y) const;
    double slab_halfwidth() const { return slab_.R; }

  private:
    SlabGrid slab_;
    Eigen::MatrixXd atil_slab_;  // N x 4, a m_R
    Eigen::VectorXd psi_;        // phi_btilde(1,0)
    Eigen::VectorXd m_slab_;
    TorusGrid cell_grid_;
    Eigen::MatrixXd atil_plus_, atil_minus_;  // torus a m, unscaled
    Eigen::VectorXd phi_plus_, phi_minus_;    // torus phi upper(0,1)
    Eigen::VectorXd m_plus_, m_minus_;
    double q_plus_, q_minus_;
    double m21_plus_, m21_minus_;  // matching constants, (1,0) entries

    double slab_bilinear(const Eigen::VectorXd& values, double y1, double y2) const;
    double torus_bilinear(const Eigen::VectorXd& values, double y1, double y2) const;
};

// Smooth compactly supported source: bump(|x|/0.42) times a low-frequency
// cosine factor, scaled to be O(10).
double source_preset(const Eigen::VectorXd& x);

// Generic cell-centered divergence-form solve on (-1/2,1/2)^d with
// homogeneous Dirichlet data.
std::pair<Eigen::VectorXd, SolveReport> solve_domain(const DomainGrid& g, const FaceTensor& B,
                                                     const Eigen::VectorXd& rhs, double tol);

// div[B(x/eps) grad u] = f m(x/eps); requires grid.h <= eps/8.
std::pair<Eigen::VectorXd, SolveReport> solve_oscillating(const SlabCoefficientSampler& sampler,
                                                          const DomainGrid& g, double eps,
                                                          double tol);

// div[A_hat(x) grad u0] = f (q+ 1_{x1>0} + q- 1_{x1<0}); harmonic face
// averaging of the normal component across the x1 = 0 face.
std::pair<Eigen::VectorXd, SolveReport> solve_effective(const PiecewiseTensor& pt,
                                                        const DomainGrid& g, double q_plus,
                                                        double q_minus, double tol);

struct ConvergenceRow {
    double eps = 0.0;
    int n = 0;
    double l2 = 0.0;
    double linf = 0.0;
    double interior_linf = 0.0;
    int iterations = 0;
    double seconds = 0.0;
};

struct RateFit {
    LineFit overall;                  // log err vs log eps
    std::vector<double> pair_slopes;  // consecutive-pair slopes
    bool degenerate = false;          // errors at the discretization floor
};

struct ConvergenceExperiment {
    std::vector<ConvergenceRow> rows;
    bool truncated = false;  // budget ran out; partial results
    bool monotone = false;
    RateFit rate_l2, rate_linf, rate_interior;
};

struct Budget {
    double max_seconds = 600.0;
    long max_unknowns = 4'000'000;
};

// Runs solve_oscillating per epsilon against solve_effective on the same
// grid; interior-L-inf taken over {|x1| >= 1/4} intersect {dist to boundary
// >= 1/8}.
ConvergenceExperiment convergence_study(const SlabCoefficientSampler& sampler,
                                        const PiecewiseTensor& pt, double q_plus, double q_minus,
                                        const std::vector<double>& eps_list, int resolution,
                                        double tol, const Budget& budget);

}  // namespace imhom
