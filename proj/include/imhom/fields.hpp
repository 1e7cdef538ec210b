#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "imhom/expr.hpp"

namespace imhom {

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quintic smoothstep: 0 on t<=0, 1 on t>=1, C^2 across the seams
// (s' and s'' vanish at both ends).
double smoothstep(double t);

// Smoothstep rescaled to the interface band: 0 at y1<=-1, 1 at y1>=+1.
double interface_blend(double y1);

// One 1-periodic coefficient pair (a, b) on the unit torus, entries given as
// expressions in y1..yd. Stored ellipticity bounds are claims to be verified
// by validate(); presets fill them with their known exact values.
struct PeriodicCoefficients {
    int d = 2;
    std::vector<Expr> a;  // d*d entries, row-major; must be symmetric
    std::vector<Expr> b;  // d entries
    double mu = 0.0;      // claimed lower ellipticity bound (0 = measure it)
    double mu1 = 0.0;     // claimed upper bound (0 = measure it)
    std::string name;

    const Expr& a_entry(int i, int j) const { return a[static_cast<size_t>(i * d + j)]; }

    // Evaluate at a point (may be outside [0,1)^d; expressions are expected
    // to be 1-periodic, which validate() checks rather than assumes).
    Eigen::MatrixXd eval_a(const Eigen::VectorXd& y) const;
    Eigen::VectorXd eval_b(const Eigen::VectorXd& y) const;
};

// The full coefficient field on the infinite slab D = R x T^{d-1}: periodic
// pieces on each side of the interface band [-1,1] joined by the smoothstep
// blend. Outside the band the pieces are returned bit-exactly (no blend
// arithmetic touches them).
struct CoefficientField {
    PeriodicCoefficients plus;
    PeriodicCoefficients minus;
    std::string name;

    int dimension() const { return plus.d; }
    bool one_sided() const;  // plus and minus share every expression text

    Eigen::MatrixXd eval_a(const Eigen::VectorXd& y) const;
    Eigen::VectorXd eval_b(const Eigen::VectorXd& y) const;
};

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    double measured_mu = 0.0;   // smallest sampled eigenvalue of a
    double measured_mu1 = 0.0;  // largest sampled eigenvalue of a
    double periodicity_defect = 0.0;
    double max_b1 = 0.0;

    bool ok() const;
    std::string summary() const;
};

// Checks the standing assumptions on one periodic piece: symmetry,
// ellipticity against the stored (or measured) bounds, 1-periodicity, and
// b1 == 0. Failures are reported, not thrown.
ValidationReport validate(const PeriodicCoefficients& pc, int samples_per_axis,
                          uint64_t seed = 12345);

// Validates both pieces plus the blend: exactness outside the band,
// C^1 continuity of the blended a across y1 = +-1, preserved symmetry /
// ellipticity / b1 == 0 inside the band.
ValidationReport validate(const CoefficientField& field, int samples_per_axis,
                          uint64_t seed = 12345);

}  // namespace imhom
