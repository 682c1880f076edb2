#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dicke/coefficients.hpp"

namespace dicke {

// Loschmidt echo M_L(t) = |sum_mu |C^0_mu|^2 exp(i mu e1 t)|^2, the survival
// probability of the lambda0 ground state under the lambda Hamiltonian.
double loschmidt_echo(const CoefficientTable& table, double e1, double t);

struct EchoSeries {
    std::vector<double> times;
    std::vector<double> m_l;
    std::vector<std::pair<double, double>> minima;  // (t_p, M_L(t_p)) at analytic t_p
};

EchoSeries echo_series(const CoefficientTable& table, double e1,
                       std::span<const double> times);

// Closed-form echo minimum M_p = 2 sqrt(eta) / (1 + eta).
double echo_minimum_closed(double eta);

// Closed-form ground-state fidelity L_p = sqrt(2) eta^(1/8) / sqrt(sqrt(eta) + 1).
double fidelity_closed(double eta);

// |C^0_0|, the numeric ground-state overlap.
double fidelity_numeric(const CoefficientTable& table);

// Saturating echo-harmonics relation
//   M_L = (a + b m2^(2/3)) / (a + m2 + b m2^(2/3)).
double le_harmonics_relation(double m2, double a = 3.5, double b = 3.0);

// Single-particle lowest-order prediction M_L ~ 1 - eps^2 m2 / 2. Diagnostic
// only: near this transition the echo follows the relation above, whose
// leading coefficient is a constant rather than a function of the coupling
// step, and this form fails accordingly.
double le_quadratic_prediction(double m2, double eps);

}  // namespace dicke
