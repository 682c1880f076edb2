#pragma once

#include <span>
#include <utility>
#include <vector>

namespace dicke {

struct FitResult {
    double a = 0.0;        // prefactor, or first relation parameter
    double b = 0.0;        // exponent, or second relation parameter
    double residual = 0.0; // RMS residual in the fitted space
    int n_points = 0;
};

using XY = std::pair<double, double>;

// Ordinary least squares of ln y on ln x: y = a x^b.
FitResult fit_power_law(std::span<const XY> points);

// Least-squares fit of M_L = (a + b m2^q) / (a + m2 + b m2^q) with fixed
// exponent q. Coarse log-grid search over a, b in [0.1, 100] followed by
// damped Gauss-Newton refinement.
FitResult fit_le_relation(std::span<const XY> points, double exponent = 2.0 / 3.0);

// Least-squares slope of ln y versus ln t restricted to t in [t_lo, t_hi].
double loglog_slope(std::span<const XY> series, double t_lo, double t_hi);

// Strict local maxima on a uniform grid; plateau ties resolve to the
// earliest grid point.
std::vector<XY> detect_peaks(std::span<const XY> series);

}  // namespace dicke
