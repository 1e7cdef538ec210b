#include "imhom/fitting.hpp"

#include <cmath>

namespace imhom {

LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    f.points = static_cast<int>(x.size());
    if (x.size() != y.size() || x.size() < 2) {
        f.degenerate = true;
        return f;
    }
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) {
        f.degenerate = true;
        return f;
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (syy == 0.0) {
        f.r_squared = 1.0;
    } else {
        double ss_res = 0;
        for (size_t i = 0; i < x.size(); ++i) {
            double r = y[i] - (f.intercept + f.slope * x[i]);
            ss_res += r * r;
        }
        f.r_squared = 1.0 - ss_res / syy;
    }
    return f;
}

LineFit log_log_fit(const std::vector<double>& scale, const std::vector<double>& err) {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < scale.size() && i < err.size(); ++i) {
        if (scale[i] > 0.0 && err[i] > 0.0) {
            lx.push_back(std::log(scale[i]));
            ly.push_back(std::log(err[i]));
        }
    }
    return linear_fit(lx, ly);
}

ExpFit exp_decay_fit(const std::vector<double>& t, const std::vector<double>& norms, double floor) {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < t.size() && i < norms.size(); ++i) {
        if (norms[i] > floor) {
            lx.push_back(t[i]);
            ly.push_back(std::log(norms[i]));
        }
    }
    ExpFit e;
    LineFit f = linear_fit(lx, ly);
    e.points = f.points;
    e.degenerate = f.degenerate || f.points < 4;
    if (!e.degenerate) {
        e.rate = -f.slope;
        e.log_amplitude = f.intercept;
        e.r_squared = f.r_squared;
    }
    return e;
}

}  // namespace imhom
