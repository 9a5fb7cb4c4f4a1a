// Ordinary least squares on (x, y) pairs; slope standard error from
// residuals. All exponent estimates in the asymptotics module reduce to
// this plus a window-sensitivity spread.

#pragma once

#include <vector>

namespace conelab {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r2 = 0.0;
    int points = 0;
    bool ok = false;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace conelab
