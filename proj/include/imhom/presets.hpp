#pragma once

#include "imhom/fields.hpp"

namespace imhom {

// Built-in periodic pieces: "identity", "layered" (a = (2+sin 2pi y1) I),
// "drift" (a = I, b2 = 0.5 cos 2pi y2), "aniso_trig" / "aniso_sep" (the two
// sides of the bundled interface preset), "bad_b1" (violates b1 == 0).
PeriodicCoefficients preset_coefficients(const std::string& name, int d);

// Built-in fields: "identity", "layered", "drift", "twosided" (anisotropic
// trig plus side, separable drift minus side), "onesided" (plus piece on
// both sides: no interface), "bad_b1".
CoefficientField preset_field(const std::string& name, int d);

bool is_preset_field(const std::string& name);

// Closed-form invariant measure of the "layered" piece: the normalized
// reciprocal 1/(2+sin 2pi y1).
double layered_measure_oracle(double y1);

// Closed-form invariant measure of the separable minus piece of "twosided":
// m ~ (1 + 0.25 sin 2pi y2)^(0.8/pi - 1), unnormalized.
double separable_measure_oracle(double y2);

// Closed-form invariant measure of the "drift" piece: m ~ exp(0.5 sin(2pi
// y2)/(2pi)), unnormalized.
double drift_measure_oracle(double y2);

}  // namespace imhom
