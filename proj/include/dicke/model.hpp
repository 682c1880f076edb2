#pragma once

#include <stdexcept>

namespace dicke {

// Thermodynamic-limit Dicke model reduced to its effective harmonic modes.
// Units: hbar = 1, energies in units of the frequencies themselves.

struct ModelParams {
    double omega = 1.0;   // field-mode frequency
    double omega0 = 1.0;  // atomic level splitting
};

enum class Phase { Normal, Critical, Superradiant };

// Effective mode energies at a coupling value. e1 vanishes exactly at the
// critical coupling; e1 <= e2 with equality only for the decoupled
// degenerate case (lambda = 0, omega = omega0).
struct EffectiveSpectrum {
    double e1;
    double e2;
    Phase phase;
};

// eta = (lambda - lambda_c) / (lambda0 - lambda_c), defined for two couplings
// strictly on the same side of the critical point.
struct ScalingRatio {
    double eta;
    double lambda;
    double lambda0;
};

// Coefficients of the canonical transformation linking the lowest-mode
// annihilation operators at two couplings:
//   c(lambda0) = p1 * c^dag(lambda) + p2 * c(lambda)
// With the cosine factor off, p2^2 - p1^2 = 1 holds identically.
struct BogoliubovPair {
    double p1;  // anomalous coefficient
    double p2;  // normal coefficient
    bool cos_factor_applied = false;
};

inline constexpr double kCriticalTol = 1e-12;

void require_valid(const ModelParams& p);

// lambda_c = sqrt(omega * omega0) / 2
double critical_coupling(const ModelParams& p);

Phase classify_phase(const ModelParams& p, double lambda, double tol = kCriticalTol);

// Lower/upper mode energies, normal branch below lambda_c and the
// kappa-parameterized branch above it. Exact zero of e1 at the critical point.
EffectiveSpectrum mode_energies(const ModelParams& p, double lambda);

// Leading near-critical asymptote of e1 for the phase lambda lies in.
// Diagnostic companion to mode_energies; no validity cutoff is enforced.
double near_critical_e1(const ModelParams& p, double lambda);

ScalingRatio scaling_eta(double lambda, double lambda0, double lambda_c);

// lambda at a prescribed eta relative to (lambda0, lambda_c).
double lambda_for_eta(const ModelParams& p, double eta, double lambda0);

// Exact pair from the mode-energy ratio x = e1(lambda0)/e1(lambda):
//   p1 = cos(r - r0)/2 * (sqrt(x) - 1/sqrt(x))
//   p2 = cos(r - r0)/2 * (sqrt(x) + 1/sqrt(x))
// apply_cos = false replaces the cosine factor by 1.
BogoliubovPair bogoliubov_exact(const ModelParams& p, double lambda0, double lambda,
                                bool apply_cos = false);

// Near-critical pair depending on eta only:
//   p1 = (eta^(-1/4) - eta^(1/4)) / 2,  p2 = (eta^(-1/4) + eta^(1/4)) / 2
BogoliubovPair bogoliubov_asymptotic(double eta);
BogoliubovPair bogoliubov_asymptotic(const ScalingRatio& ratio);

}  // namespace dicke
