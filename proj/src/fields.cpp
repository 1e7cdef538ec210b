#include "imhom/fields.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace imhom {

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double interface_blend(double y1) { return smoothstep(0.5 * (y1 + 1.0)); }

namespace {

double checked_eval(const Expr& e, const Eigen::VectorXd& y) {
    double v = e.eval({y.data(), static_cast<size_t>(y.size())});
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite value from expression \"" << e.text() << "\" at point (";
        for (int k = 0; k < y.size(); ++k) os << (k ? "," : "") << y[k];
        os << ")";
        throw FieldError(os.str());
    }
    return v;
}

}  // namespace

Eigen::MatrixXd PeriodicCoefficients::eval_a(const Eigen::VectorXd& y) const {
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = checked_eval(a_entry(i, j), y);
    return m;
}

Eigen::VectorXd PeriodicCoefficients::eval_b(const Eigen::VectorXd& y) const {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = checked_eval(b[static_cast<size_t>(i)], y);
    return v;
}

bool CoefficientField::one_sided() const {
    for (size_t k = 0; k < plus.a.size(); ++k)
        if (plus.a[k].text() != minus.a[k].text()) return false;
    for (size_t k = 0; k < plus.b.size(); ++k)
        if (plus.b[k].text() != minus.b[k].text()) return false;
    return true;
}

Eigen::MatrixXd CoefficientField::eval_a(const Eigen::VectorXd& y) const {
    double y1 = y[0];
    if (y1 >= 1.0) return plus.eval_a(y);
    if (y1 <= -1.0) return minus.eval_a(y);
    double s = interface_blend(y1);
    return s * plus.eval_a(y) + (1.0 - s) * minus.eval_a(y);
}

Eigen::VectorXd CoefficientField::eval_b(const Eigen::VectorXd& y) const {
    double y1 = y[0];
    if (y1 >= 1.0) return plus.eval_b(y);
    if (y1 <= -1.0) return minus.eval_b(y);
    double s = interface_blend(y1);
    return s * plus.eval_b(y) + (1.0 - s) * minus.eval_b(y);
}

bool ValidationReport::ok() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.pass ? "[pass] " : "[FAIL] ") << c.name << " (measured " << c.measured << ") "
           << c.detail << "\n";
    return os.str();
}

namespace {

// Sample grid over [0,1)^d plus a handful of random unit directions per the
// ellipticity check.
struct Sampler {
    int d;
    int n;
    Eigen::VectorXd point(long idx) const {
        Eigen::VectorXd y(d);
        for (int k = 0; k < d; ++k) {
            y[k] = static_cast<double>(idx % n) / n;
            idx /= n;
        }
        return y;
    }
    long count() const {
        long c = 1;
        for (int k = 0; k < d; ++k) c *= n;
        return c;
    }
};

std::vector<Eigen::VectorXd> random_unit_vectors(int d, int count, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) {
        Eigen::VectorXd v(d);
        do {
            for (int i = 0; i < d; ++i) v[i] = gauss(rng);
        } while (v.norm() < 1e-8);
        out.push_back(v.normalized());
    }
    return out;
}

void run_piece_checks(const PeriodicCoefficients& pc, int samples, uint64_t seed,
                      const std::string& tag, ValidationReport& rep) {
    Sampler s{pc.d, samples};
    auto xis = random_unit_vectors(pc.d, 8, seed);

    double sym_defect = 0.0, emin = std::numeric_limits<double>::infinity(), emax = 0.0;
    double per_defect = 0.0, b1max = 0.0;
    for (long idx = 0; idx < s.count(); ++idx) {
        Eigen::VectorXd y = s.point(idx);
        Eigen::MatrixXd A = pc.eval_a(y);
        sym_defect = std::max(sym_defect, (A - A.transpose()).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
        emin = std::min(emin, es.eigenvalues().minCoeff());
        emax = std::max(emax, es.eigenvalues().maxCoeff());
        for (const auto& xi : xis) {
            double q = xi.dot(A * xi);
            emin = std::min(emin, q);
            emax = std::max(emax, q);
        }
        Eigen::VectorXd b = pc.eval_b(y);
        b1max = std::max(b1max, std::abs(b[0]));
        for (int k = 0; k < pc.d; ++k) {
            Eigen::VectorXd ys = y;
            ys[k] += 1.0;
            per_defect = std::max(per_defect, (pc.eval_a(ys) - A).cwiseAbs().maxCoeff());
            per_defect = std::max(per_defect, (pc.eval_b(ys) - b).cwiseAbs().maxCoeff());
        }
    }

    const double tol = 1e-10;
    double mu = pc.mu > 0.0 ? pc.mu : emin;
    double mu1 = pc.mu1 > 0.0 ? pc.mu1 : emax;
    rep.measured_mu = emin;
    rep.measured_mu1 = emax;
    rep.periodicity_defect = std::max(rep.periodicity_defect, per_defect);
    rep.max_b1 = std::max(rep.max_b1, b1max);

    rep.checks.push_back({tag + "symmetry", sym_defect <= tol, sym_defect, ""});
    rep.checks.push_back({tag + "ellipticity_lower", emin >= mu - 1e-8 && emin > 0.0, emin,
                          "claimed mu=" + std::to_string(mu)});
    rep.checks.push_back({tag + "ellipticity_upper", emax <= mu1 + 1e-8, emax,
                          "claimed mu1=" + std::to_string(mu1)});
    rep.checks.push_back({tag + "periodicity", per_defect <= 1e-12, per_defect, ""});
    rep.checks.push_back({tag + "b1_zero", b1max <= tol, b1max, ""});
}

}  // namespace

ValidationReport validate(const PeriodicCoefficients& pc, int samples_per_axis, uint64_t seed) {
    if (samples_per_axis < 4) throw FieldError("samples_per_axis must be >= 4");
    ValidationReport rep;
    run_piece_checks(pc, samples_per_axis, seed, "", rep);
    return rep;
}

ValidationReport validate(const CoefficientField& field, int samples_per_axis, uint64_t seed) {
    if (samples_per_axis < 4) throw FieldError("samples_per_axis must be >= 4");
    ValidationReport rep;
    run_piece_checks(field.plus, samples_per_axis, seed, "plus.", rep);
    double mu_sides = rep.measured_mu;
    run_piece_checks(field.minus, samples_per_axis, seed, "minus.", rep);
    mu_sides = std::min(mu_sides, rep.measured_mu);

    int d = field.dimension();
    int n = samples_per_axis;

    // Blend checks on the band [-1,1]: exactness at the edges, preserved
    // symmetry/ellipticity/b1, and a C^1 seam (jump of the y1-difference
    // quotient of a across +-1 is O(probe step)).
    double exact_defect = 0.0, blend_emin = std::numeric_limits<double>::infinity();
    double blend_b1 = 0.0, blend_sym = 0.0, seam_jump = 0.0;
    const double delta = 1e-4;
    long transverse = 1;
    for (int k = 1; k < d; ++k) transverse *= n;
    for (long idx = 0; idx < transverse; ++idx) {
        Eigen::VectorXd y(d);
        y.setZero();
        long rest = idx;
        for (int k = 1; k < d; ++k) {
            y[k] = static_cast<double>(rest % n) / n;
            rest /= n;
        }
        for (int i = 0; i <= n; ++i) {
            y[0] = -1.0 + 2.0 * i / n;
            Eigen::MatrixXd A = field.eval_a(y);
            blend_sym = std::max(blend_sym, (A - A.transpose()).cwiseAbs().maxCoeff());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
            blend_emin = std::min(blend_emin, es.eigenvalues().minCoeff());
            blend_b1 = std::max(blend_b1, std::abs(field.eval_b(y)[0]));
        }
        y[0] = 1.0 + 1.0 / n;
        exact_defect = std::max(exact_defect,
                                (field.eval_a(y) - field.plus.eval_a(y)).cwiseAbs().maxCoeff());
        y[0] = -1.0 - 1.0 / n;
        exact_defect = std::max(exact_defect,
                                (field.eval_a(y) - field.minus.eval_a(y)).cwiseAbs().maxCoeff());

        auto d1a = [&](double y1) {
            Eigen::VectorXd yp = y, ym = y;
            yp[0] = y1 + delta;
            ym[0] = y1 - delta;
            return ((field.eval_a(yp) - field.eval_a(ym)) / (2 * delta)).eval();
        };
        for (double seam : {1.0, -1.0}) {
            seam_jump = std::max(seam_jump,
                                 (d1a(seam + 2 * delta) - d1a(seam - 2 * delta)).cwiseAbs().maxCoeff() /
                                     std::max(1.0, rep.measured_mu1));
        }
    }

    rep.checks.push_back({"blend.c1_seam", seam_jump <= 100 * delta, seam_jump,
                          "relative grad-a jump across seam"});
    rep.checks.push_back({"blend.exact_outside", exact_defect == 0.0, exact_defect,
                          "field must equal the pure piece bit-exactly for |y1|>1"});
    rep.checks.push_back({"blend.symmetry", blend_sym <= 1e-10, blend_sym, ""});
    rep.checks.push_back({"blend.ellipticity", blend_emin >= mu_sides - 1e-8, blend_emin,
                          "min over band vs min(mu+,mu-)"});
    rep.checks.push_back({"blend.b1_zero", blend_b1 <= 1e-10, blend_b1, ""});
    return rep;
}

}  // namespace imhom
