#include "dicke/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dicke/numeric.hpp"

namespace dicke {

namespace {

struct LinearFit {
    double slope;
    double intercept;
    double rms;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    CompensatedSum sx, sy;
    for (std::size_t i = 0; i < n; ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
    }
    double mx = sx.value() / double(n);
    double my = sy.value() / double(n);
    CompensatedSum sxx, sxy;
    for (std::size_t i = 0; i < n; ++i) {
        sxx.add((x[i] - mx) * (x[i] - mx));
        sxy.add((x[i] - mx) * (y[i] - my));
    }
    if (sxx.value() == 0.0) throw std::invalid_argument("degenerate abscissas");
    LinearFit f;
    f.slope = sxy.value() / sxx.value();
    f.intercept = my - f.slope * mx;
    CompensatedSum rr;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        rr.add(r * r);
    }
    f.rms = std::sqrt(rr.value() / double(n));
    return f;
}

double relation_model(double m2, double u, double a, double b) {
    return (a + b * u) / (a + m2 + b * u);
}

double relation_sse(const std::vector<double>& m2, const std::vector<double>& u,
                    const std::vector<double>& y, double a, double b) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < m2.size(); ++i) {
        double r = relation_model(m2[i], u[i], a, b) - y[i];
        acc.add(r * r);
    }
    return acc.value();
}

}  // namespace

FitResult fit_power_law(std::span<const XY> points) {
    if (points.size() < 2) throw std::invalid_argument("power-law fit needs at least 2 points");
    std::vector<double> lx, ly;
    lx.reserve(points.size());
    ly.reserve(points.size());
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("power-law fit requires positive coordinates");
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    LinearFit f = least_squares(lx, ly);
    return FitResult{std::exp(f.intercept), f.slope, f.rms, static_cast<int>(points.size())};
}

FitResult fit_le_relation(std::span<const XY> points, double exponent) {
    if (points.size() < 3) throw std::invalid_argument("relation fit needs at least 3 points");
    std::vector<double> m2, u, y;
    for (const auto& [x, v] : points) {
        if (x < 0.0) throw std::invalid_argument("second moments must be nonnegative");
        if (!(v > 0.0) || v > 1.0 + 1e-12)
            throw std::invalid_argument("echo values must lie in (0, 1]");
        m2.push_back(x);
        u.push_back(std::pow(x, exponent));
        y.push_back(v);
    }

    // Coarse log grid over [0.1, 100]^2.
    constexpr int kGrid = 40;
    double best_a = 1.0, best_b = 1.0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        double a = 0.1 * std::pow(1000.0, double(i) / double(kGrid - 1));
        for (int j = 0; j < kGrid; ++j) {
            double b = 0.1 * std::pow(1000.0, double(j) / double(kGrid - 1));
            double sse = relation_sse(m2, u, y, a, b);
            if (sse < best_sse) {
                best_sse = sse;
                best_a = a;
                best_b = b;
            }
        }
    }

    // Damped Gauss-Newton: dr/da = m2/D^2, dr/db = u m2/D^2.
    double a = best_a, b = best_b;
    double lm = 1e-8;
    constexpr int kMaxIter = 500;
    bool converged = false;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
        for (std::size_t i = 0; i < m2.size(); ++i) {
            double den = a + m2[i] + b * u[i];
            double r = (a + b * u[i]) / den - y[i];
            double da = m2[i] / (den * den);
            double db = u[i] * m2[i] / (den * den);
            jtj00 += da * da;
            jtj01 += da * db;
            jtj11 += db * db;
            jtr0 += da * r;
            jtr1 += db * r;
        }
        double gnorm = std::sqrt(jtr0 * jtr0 + jtr1 * jtr1);
        if (gnorm < 1e-10) {
            converged = true;
            break;
        }
        double d00 = jtj00 * (1.0 + lm), d11 = jtj11 * (1.0 + lm);
        double det = d00 * d11 - jtj01 * jtj01;
        if (det == 0.0) break;
        double step_a = -(d11 * jtr0 - jtj01 * jtr1) / det;
        double step_b = -(d00 * jtr1 - jtj01 * jtr0) / det;
        double na = a + step_a, nb = b + step_b;
        int backtracks = 0;
        while ((na <= 0.0 || nb <= 0.0 ||
                relation_sse(m2, u, y, na, nb) > relation_sse(m2, u, y, a, b)) &&
               backtracks < 60) {
            step_a *= 0.5;
            step_b *= 0.5;
            na = a + step_a;
            nb = b + step_b;
            ++backtracks;
        }
        if (backtracks >= 60) {
            lm *= 10.0;
            if (lm > 1e12) break;
            continue;
        }
        a = na;
        b = nb;
        lm = std::max(lm * 0.3, 1e-12);
    }
    if (!converged) {
        // Accept a stationary-enough iterate only if the gradient test just
        // missed; otherwise report the failure with the best parameters.
        double jtr0 = 0, jtr1 = 0;
        for (std::size_t i = 0; i < m2.size(); ++i) {
            double den = a + m2[i] + b * u[i];
            double r = (a + b * u[i]) / den - y[i];
            jtr0 += m2[i] / (den * den) * r;
            jtr1 += u[i] * m2[i] / (den * den) * r;
        }
        if (std::sqrt(jtr0 * jtr0 + jtr1 * jtr1) > 1e-7)
            throw std::runtime_error("relation fit did not converge; best iterate a = " +
                                     sci12(a) + ", b = " + sci12(b));
    }
    double rms = std::sqrt(relation_sse(m2, u, y, a, b) / double(m2.size()));
    return FitResult{a, b, rms, static_cast<int>(points.size())};
}

double loglog_slope(std::span<const XY> series, double t_lo, double t_hi) {
    std::vector<double> lx, ly;
    for (const auto& [t, y] : series) {
        if (t < t_lo || t > t_hi) continue;
        if (!(t > 0.0) || !(y > 0.0)) continue;
        lx.push_back(std::log(t));
        ly.push_back(std::log(y));
    }
    if (lx.size() < 3)
        throw std::invalid_argument("empty window: fewer than 3 usable points in [" +
                                    sci12(t_lo) + ", " + sci12(t_hi) + "]");
    return least_squares(lx, ly).slope;
}

std::vector<XY> detect_peaks(std::span<const XY> series) {
    if (series.size() < 3) throw std::invalid_argument("peak detection needs at least 3 points");
    std::size_t n = series.size();
    double step = series[1].first - series[0].first;
    if (!(step > 0.0)) throw std::invalid_argument("grid must be increasing");
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double d = series[i + 1].first - series[i].first;
        if (std::abs(d - step) > 1e-9 * std::max(std::abs(step), 1.0))
            throw std::invalid_argument("peak detection requires a uniform grid");
    }
    std::vector<XY> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(series[i].second > series[i - 1].second)) continue;
        if (series[i].second > series[i + 1].second) {
            peaks.push_back(series[i]);
            continue;
        }
        // Plateau: scan forward; report the earliest point if it drops after.
        std::size_t j = i + 1;
        while (j + 1 < n && series[j].second == series[i].second) ++j;
        if (series[j].second < series[i].second) peaks.push_back(series[i]);
    }
    return peaks;
}

}  // namespace dicke
