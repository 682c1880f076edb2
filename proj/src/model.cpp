#include "dicke/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dicke {

namespace {

// Branch convention for the internal rotation angle: 2r in (-pi/2, pi/2],
// with the degenerate-denominator case resolved to pi/2 by continuity.
double half_angle_2r(double numerator, double denominator) {
    if (denominator == 0.0) {
        if (numerator == 0.0) return std::numbers::pi / 2.0;
        return std::copysign(std::numbers::pi / 2.0, numerator);
    }
    return std::atan(numerator / denominator);
}

double rotation_angle(const ModelParams& p, double lambda, Phase phase) {
    if (phase == Phase::Normal) {
        double num = 4.0 * lambda * std::sqrt(p.omega * p.omega0);
        double den = p.omega0 * p.omega0 - p.omega * p.omega;
        return 0.5 * half_angle_2r(num, den);
    }
    double kappa = p.omega * p.omega0 / (4.0 * lambda * lambda);
    double num = 2.0 * p.omega * p.omega0 * kappa * kappa;
    double den = p.omega0 * p.omega0 - kappa * kappa * p.omega * p.omega;
    return 0.5 * half_angle_2r(num, den);
}

}  // namespace

void require_valid(const ModelParams& p) {
    if (!(p.omega > 0.0) || !(p.omega0 > 0.0))
        throw std::invalid_argument("model frequencies must be positive");
}

double critical_coupling(const ModelParams& p) {
    require_valid(p);
    return 0.5 * std::sqrt(p.omega * p.omega0);
}

Phase classify_phase(const ModelParams& p, double lambda, double tol) {
    if (lambda < 0.0) throw std::invalid_argument("coupling must be nonnegative");
    double lc = critical_coupling(p);
    if (std::abs(lambda - lc) <= tol) return Phase::Critical;
    return lambda < lc ? Phase::Normal : Phase::Superradiant;
}

EffectiveSpectrum mode_energies(const ModelParams& p, double lambda) {
    Phase phase = classify_phase(p, lambda);
    double w2 = p.omega * p.omega;
    double w02 = p.omega0 * p.omega0;
    double ww0 = p.omega * p.omega0;

    // The squared energies are the roots of a quadratic; the smaller one is
    // evaluated through the root product, which cancels exactly at the
    // critical coupling and stays fully accurate at strong detuning.
    double sum, rad, product;
    if (phase == Phase::Superradiant) {
        double kappa = ww0 / (4.0 * lambda * lambda);
        double a = w02 / (kappa * kappa);
        sum = w2 + a;
        rad = (a - w2) * (a - w2) + 4.0 * w2 * w02;
        product = w2 * w02 * (1.0 / (kappa * kappa) - 1.0);
    } else {
        sum = w2 + w02;
        rad = (w02 - w2) * (w02 - w2) + 16.0 * lambda * lambda * ww0;
        product = ww0 * (ww0 - 4.0 * lambda * lambda);
    }
    double e2sq = 0.5 * (sum + std::sqrt(rad));
    double e1sq = phase == Phase::Critical ? 0.0 : product / e2sq;
    if (e1sq < 0.0)
        throw std::runtime_error("mode_energies: negative squared energy beyond rounding");

    return EffectiveSpectrum{std::sqrt(e1sq), std::sqrt(e2sq), phase};
}

double near_critical_e1(const ModelParams& p, double lambda) {
    Phase phase = classify_phase(p, lambda);
    double lc = critical_coupling(p);
    double scale = p.omega * p.omega + p.omega0 * p.omega0;
    if (phase == Phase::Critical) return 0.0;
    if (phase == Phase::Normal)
        return std::sqrt(8.0 * lc * (lc - lambda) * p.omega * p.omega0 / scale);
    return std::sqrt(16.0 * (lambda - lc) * (lambda + lc) * (lambda * lambda + lc * lc) / scale);
}

ScalingRatio scaling_eta(double lambda, double lambda0, double lambda_c) {
    double d = lambda - lambda_c;
    double d0 = lambda0 - lambda_c;
    if (d == 0.0 || d0 == 0.0 || (d > 0.0) != (d0 > 0.0))
        throw std::invalid_argument("same-phase comparison required");
    return ScalingRatio{d / d0, lambda, lambda0};
}

double lambda_for_eta(const ModelParams& p, double eta, double lambda0) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    double lc = critical_coupling(p);
    if (lambda0 == lc) throw std::invalid_argument("lambda0 must differ from the critical coupling");
    return lc + eta * (lambda0 - lc);
}

BogoliubovPair bogoliubov_exact(const ModelParams& p, double lambda0, double lambda,
                                bool apply_cos) {
    Phase ph = classify_phase(p, lambda);
    Phase ph0 = classify_phase(p, lambda0);
    if (ph != ph0 || ph == Phase::Critical)
        throw std::invalid_argument("same-phase comparison required");

    double e1 = mode_energies(p, lambda).e1;
    double e10 = mode_energies(p, lambda0).e1;
    if (e1 <= 0.0 || e10 <= 0.0)
        throw std::domain_error("critical point not representable");

    double sx = std::sqrt(e10 / e1);  // x^(1/2) with x = e1(lambda0)/e1(lambda)
    double c = 1.0;
    if (apply_cos)
        c = std::cos(rotation_angle(p, lambda, ph) - rotation_angle(p, lambda0, ph0));

    return BogoliubovPair{0.5 * c * (sx - 1.0 / sx), 0.5 * c * (sx + 1.0 / sx), apply_cos};
}

BogoliubovPair bogoliubov_asymptotic(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    double q = std::pow(eta, 0.25);
    return BogoliubovPair{0.5 * (1.0 / q - q), 0.5 * (1.0 / q + q), false};
}

BogoliubovPair bogoliubov_asymptotic(const ScalingRatio& ratio) {
    return bogoliubov_asymptotic(ratio.eta);
}

}  // namespace dicke
