#include "dicke/echo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dicke/numeric.hpp"

namespace dicke {

double loschmidt_echo(const CoefficientTable& table, double e1, double t) {
    const std::vector<double>& g0 = table.c[0];
    double theta = e1 * t;
    CompensatedSum re, im;
    for (int mu = 0; mu <= table.ground_cut; mu += 2) {
        double w = g0[static_cast<std::size_t>(mu)] * g0[static_cast<std::size_t>(mu)];
        re.add(w * std::cos(mu * theta));
        im.add(w * std::sin(mu * theta));
    }
    double a = re.value(), b = im.value();
    return a * a + b * b;
}

EchoSeries echo_series(const CoefficientTable& table, double e1,
                       std::span<const double> times) {
    EchoSeries out;
    out.times.assign(times.begin(), times.end());
    out.m_l.resize(times.size());
    for (std::size_t j = 0; j < times.size(); ++j)
        out.m_l[j] = loschmidt_echo(table, e1, times[j]);

    if (e1 > 0.0 && !times.empty()) {
        double t_max = *std::max_element(out.times.begin(), out.times.end());
        for (int k = 1;; k += 2) {
            double tp = double(k) * std::numbers::pi / (2.0 * e1);
            if (tp > t_max) break;
            out.minima.emplace_back(tp, loschmidt_echo(table, e1, tp));
        }
    }
    return out;
}

double echo_minimum_closed(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    return 2.0 * std::sqrt(eta) / (1.0 + eta);
}

double fidelity_closed(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    return std::numbers::sqrt2 * std::pow(eta, 0.125) / std::sqrt(std::sqrt(eta) + 1.0);
}

double fidelity_numeric(const CoefficientTable& table) {
    return std::abs(table.c[0][0]);
}

double le_harmonics_relation(double m2, double a, double b) {
    if (m2 < 0.0) throw std::invalid_argument("second moment must be nonnegative");
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("relation parameters must be positive");
    double u = std::pow(m2, 2.0 / 3.0);
    return (a + b * u) / (a + m2 + b * u);
}

double le_quadratic_prediction(double m2, double eps) {
    if (m2 < 0.0) throw std::invalid_argument("second moment must be nonnegative");
    return 1.0 - 0.5 * eps * eps * m2;
}

}  // namespace dicke
