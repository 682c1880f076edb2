#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "dicke/coefficients.hpp"
#include "dicke/model.hpp"

namespace dicke {

// Survival amplitudes g_n(t) = sum_mu C[n][mu] C[0][mu] exp(-i mu e1 t).
// Only even n are populated; odd n vanish identically by parity.
struct SurvivalAmplitudes {
    std::vector<std::complex<double>> g;
};

SurvivalAmplitudes survival_amplitudes(const CoefficientTable& table, double e1, double t);

// Unnormalized harmonics weight, factorized over the survival amplitudes:
// F(m,t) = sum_n |g_{n+m}(t)|^2 |g_n(t)|^2.
double harmonics_weight(const CoefficientTable& table, double e1, int m, double t);

// Same quantity evaluated as the literal double sum over basis-index pairs,
// kept as an independent cross-check of the factorized path. Quadratic in
// the basis size; intended for small tables.
double harmonics_weight_direct(const CoefficientTable& table, double e1, int m, double t);

struct SecondMoment {
    double value = 0.0;
    bool converged = true;
    double tail_fraction = 0.0;  // estimated contribution beyond m_max
};

SecondMoment second_moment(const CoefficientTable& table, double e1, double t, int m_max);

// Q(m,t) = F(m,t) / sum_m F(m,t) over m in [0, m_max]; odd entries are zero.
std::vector<double> q_distribution(const CoefficientTable& table, double e1, double t,
                                   int m_max);

// t_p = k pi / (2 e1) for odd k; even or nonpositive k is rejected.
std::vector<double> peak_times(double e1, std::span<const int> k_list);

// T = pi / e1, the shared period of the second moment and the echo.
double period(double e1);

// Second moment at the first peak time, the oscillation amplitude A_p.
double amplitude_Ap(const CoefficientTable& table, double e1);

struct ConvergenceReport {
    int n_sum = 0;
    int m_max = 0;
    int ground_cut = 0;
    double ground_tail = 0.0;
    double max_row_tail = 0.0;
    int doublings = 0;
};

struct HarmonicsResult {
    std::vector<double> times;
    std::vector<double> second_moment;
    std::vector<double> echo;  // M_L(t) = |g_0(t)|^2 on the same grid
    std::vector<double> q_times;
    std::vector<std::vector<double>> q_rows;
    int m_max = 0;
    ConvergenceReport report;
};

// Production evaluator. The evolved state is a zero-mean pure Gaussian
// state at every time, so its number-basis populations are fixed by the
// survival probability alone:
//   p_0(t) = M(t),  p_{2k}(t) = M(t) ((2k-1)!!/(2k)!!) (1 - M(t)^2)^k,
// with M(t) computed from the ground row. This route stays accurate at
// excitation depths where laddering a truncated row cannot (the raising
// action amplifies the dropped tail combinatorially); the ladder path is
// kept for moderate depths and cross-checked against this one. Cutoffs
// come from a doubling loop probed at the most demanding requested time.
class HarmonicsEvaluator {
public:
    struct Options {
        double tol = 1e-12;        // ground-row tail tolerance
        double rel_change = 1e-6;  // doubling-loop stop criterion
        int start = 32;
        int side_cap = 1 << 15;    // cap on n_sum and m_max individually
        int mu_cap = kGroundBasisCap;
        int n_fixed = 0;           // >0 skips the doubling loop
        int m_fixed = 0;
    };

    HarmonicsEvaluator(const BogoliubovPair& pair, double e1);
    HarmonicsEvaluator(const BogoliubovPair& pair, double e1, Options opt);

    const ConvergenceReport& converge(std::span<const double> times);

    HarmonicsResult evaluate(std::span<const double> times,
                             std::span<const double> q_times = {}) const;

    double second_moment_at(double t) const;
    double echo_at(double t) const;
    double amplitude() const;  // second moment at t_p(k = 1)

    const ConvergenceReport& report() const { return report_; }
    double e1() const { return e1_; }
    double ground_fidelity() const { return std::abs(ground_.c[0]); }

private:
    struct Populations {
        // pop[j][n] = |g_n(t_j)|^2; echo[j] = |g_0(t_j)|^2 unnormalized
        std::vector<std::vector<double>> pop;
        std::vector<double> echo;
    };
    Populations populations(std::span<const double> times, int n_total) const;
    double moment_from_pops(const std::vector<double>& pop, int n_sum, int m_max) const;

    GroundRow ground_;
    double e1_;
    Options opt_;
    double mass_total_ = 1.0;           // sum of retained ground weights
    std::vector<double> pair_weights_;  // W_j = sum_nu c_nu^2 c_{nu+2j}^2
    ConvergenceReport report_;
    bool converged_ = false;
};

}  // namespace dicke
