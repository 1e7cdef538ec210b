#pragma once

#include <Eigen/Dense>
#include <vector>

namespace imhom {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points = 0;
    bool degenerate = false;  // too few usable points or zero variance
};

LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log(err) against log(scale): the observed order of a refinement
// study (scale = h) or rate of an epsilon sweep. Non-positive entries are
// skipped; fewer than two usable points flag the fit degenerate.
LineFit log_log_fit(const std::vector<double>& scale, const std::vector<double>& err);

// Exponential fit |f|(t) ~ A exp(-c t) on the given samples, skipping values
// at or below the floor. rate > 0 means decay in the direction of
// increasing t (pass -t for the mirrored side).
struct ExpFit {
    double rate = 0.0;
    double log_amplitude = 0.0;
    double r_squared = 0.0;
    int points = 0;
    bool degenerate = false;
};

ExpFit exp_decay_fit(const std::vector<double>& t, const std::vector<double>& norms, double floor);

}  // namespace imhom
