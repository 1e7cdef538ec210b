#include "imhom/presets.hpp"

#include <cmath>

namespace imhom {

namespace {

constexpr double kPi = 3.14159265358979323846;

PeriodicCoefficients build(int d, const std::string& name,
                           const std::vector<std::string>& a_entries,
                           const std::vector<std::string>& b_entries, double mu, double mu1) {
    PeriodicCoefficients pc;
    pc.d = d;
    pc.name = name;
    pc.mu = mu;
    pc.mu1 = mu1;
    pc.a.reserve(static_cast<size_t>(d * d));
    for (const auto& e : a_entries) pc.a.push_back(Expr::parse(e, d));
    pc.b.reserve(static_cast<size_t>(d));
    for (const auto& e : b_entries) pc.b.push_back(Expr::parse(e, d));
    return pc;
}

std::vector<std::string> diag_entries(int d, const std::string& diag) {
    std::vector<std::string> a(static_cast<size_t>(d * d), "0");
    for (int i = 0; i < d; ++i) a[static_cast<size_t>(i * d + i)] = diag;
    return a;
}

std::vector<std::string> zero_vec(int d) { return std::vector<std::string>(static_cast<size_t>(d), "0"); }

}  // namespace

PeriodicCoefficients preset_coefficients(const std::string& name, int d) {
    if (name == "identity") return build(d, name, diag_entries(d, "1"), zero_vec(d), 1.0, 1.0);
    if (name == "const2") return build(d, name, diag_entries(d, "2"), zero_vec(d), 2.0, 2.0);
    if (name == "layered")
        return build(d, name, diag_entries(d, "2 + sin(2*pi*y1)"), zero_vec(d), 1.0, 3.0);
    if (name == "drift") {
        auto b = zero_vec(d);
        b[1] = "0.5*cos(2*pi*y2)";
        return build(d, name, diag_entries(d, "1"), b, 1.0, 1.0);
    }
    if (name == "bad_b1") {
        auto b = zero_vec(d);
        b[0] = "1";
        return build(d, name, diag_entries(d, "1"), b, 1.0, 1.0);
    }
    if (name == "aniso_trig") {
        // strongly anisotropic so interface boundary layers decay at a
        // moderate, well-resolved rate (~ 2 pi sqrt(a22/a11))
        auto a = diag_entries(d, "1");
        a[0] = "24 + 2*sin(2*pi*y1)*cos(2*pi*y2)";
        a[static_cast<size_t>(d + 1)] = "1 + 0.25*cos(2*pi*y1)";
        a[1] = "0.15*sin(2*pi*y1)*sin(2*pi*y2)";
        a[static_cast<size_t>(d)] = "0.15*sin(2*pi*y1)*sin(2*pi*y2)";
        return build(d, name, a, zero_vec(d), 0.74, 26.2);
    }
    if (name == "aniso_sep") {
        // y2-separable: (a22 m)' = b2 m has a closed-form periodic solution
        // and the centering condition holds exactly
        auto a = diag_entries(d, "1");
        a[0] = "20 + 1.5*cos(2*pi*y2)";
        a[static_cast<size_t>(d + 1)] = "1 + 0.25*sin(2*pi*y2)";
        auto b = zero_vec(d);
        b[1] = "0.4*cos(2*pi*y2)";
        return build(d, name, a, b, 0.74, 21.6);
    }
    throw FieldError("unknown coefficient preset '" + name + "'");
}

CoefficientField preset_field(const std::string& name, int d) {
    CoefficientField f;
    f.name = name;
    if (name == "identity" || name == "layered" || name == "drift" || name == "bad_b1") {
        f.plus = preset_coefficients(name, d);
        f.minus = preset_coefficients(name, d);
        return f;
    }
    if (name == "twosided") {
        f.plus = preset_coefficients("aniso_trig", d);
        f.minus = preset_coefficients("aniso_sep", d);
        return f;
    }
    if (name == "onesided") {
        f.plus = preset_coefficients("aniso_trig", d);
        f.minus = preset_coefficients("aniso_trig", d);
        return f;
    }
    if (name == "twoconst") {
        f.plus = preset_coefficients("const2", d);
        f.minus = preset_coefficients("identity", d);
        return f;
    }
    throw FieldError("unknown field preset '" + name + "'");
}

bool is_preset_field(const std::string& name) {
    return name == "identity" || name == "layered" || name == "drift" || name == "bad_b1" ||
           name == "twosided" || name == "onesided" || name == "twoconst";
}

double layered_measure_oracle(double y1) { return 1.0 / (2.0 + std::sin(2.0 * kPi * y1)); }

double separable_measure_oracle(double y2) {
    return std::pow(1.0 + 0.25 * std::sin(2.0 * kPi * y2), 0.8 / kPi - 1.0);
}

double drift_measure_oracle(double y2) { return std::exp(0.5 * std::sin(2.0 * kPi * y2) / (2.0 * kPi)); }

}  // namespace imhom
