#pragma once

#include <stdexcept>
#include <vector>

#include "dicke/model.hpp"

namespace dicke {

// Requested truncation tolerance could not be met under the basis cap.
struct TruncationError : std::runtime_error {
    TruncationError(const std::string& msg, double achieved)
        : std::runtime_error(msg), achieved_tail(achieved) {}
    double achieved_tail;
};

inline constexpr int kGroundBasisCap = 1 << 16;
inline constexpr double kDefaultRowTailLimit = 1e-8;

// Ground-state expansion of the lambda0 ground state in the lambda number
// basis. Entries alternate in sign for p1 > 0 and vanish at odd indices.
// The row is normalized against the infinite sum, estimated by the exact
// partial sum plus a rigorous geometric tail bound, so sum(c^2) = 1 - tail.
struct GroundRow {
    std::vector<double> c;  // indices 0..cut, odd entries exactly zero
    double tail_mass = 0.0;
    int cut = 0;            // highest populated (even) index
};

// min_cut forces a deeper basis than the tolerance alone asks for; the
// ladder needs that headroom because the raising action amplifies whatever
// mass the cut dropped.
GroundRow ground_row(const BogoliubovPair& pair, double tol, int mu_cap = kGroundBasisCap,
                     int min_cut = 0);

// Smallest even basis depth that keeps the amplified edge error of an
// n_target-step ladder below target_log10 orders of magnitude.
int ladder_safe_cut(const BogoliubovPair& pair, int n_target, double target_log10 = -13.0);

// Truncated overlap table C[n][mu] = <Phi_mu(lambda) | Phi_n(lambda0)>.
// Row 0 is the ground row; higher rows follow from the one-step ladder
// recursion. Rows are never renormalized: each per-row norm deficit is
// recorded so truncation stays auditable.
struct CoefficientTable {
    BogoliubovPair pair;
    double p_ratio_sq = 0.0;  // (p1/p2)^2
    int mu_max = 0;           // highest retained basis index (even)
    int n_max = 0;            // highest row present
    int ground_cut = 0;
    double tol = 0.0;
    int mu_cap = kGroundBasisCap;
    std::vector<std::vector<double>> c;
    std::vector<double> row_tail_mass;
};

CoefficientTable make_table(const BogoliubovPair& pair, double tol,
                            int mu_cap = kGroundBasisCap);
CoefficientTable make_table(const BogoliubovPair& pair, double tol, int mu_cap,
                            int min_cut);

// Extends the table up to row n_target. Columns grow as needed so every row
// keeps its exact support, unless the basis cap clips them; a clipped row
// whose norm deficit exceeds eps_row raises TruncationError.
void ladder_extend(CoefficientTable& table, int n_target,
                   double eps_row = kDefaultRowTailLimit);

CoefficientTable build_table(const BogoliubovPair& pair, double tol, int n_target,
                             int mu_cap = kGroundBasisCap,
                             double eps_row = kDefaultRowTailLimit);

// |C^0_mu|^2 from the double-factorial closed form, evaluated in log space;
// indices beyond mu_max are dropped, odd entries are zero.
std::vector<double> closed_form_ground_weights(double p_ratio_sq, int mu_max);

// Partial sums of sum_mu P^(mu/2) (mu-1)!!/mu!! and its alternating variant,
// against the closed forms (1 -+ P)^(-1/2).
struct SeriesIdentityResult {
    double plain_sum = 0.0;
    double alternating_sum = 0.0;
    double plain_residual = 0.0;
    double alternating_residual = 0.0;
    int terms = 0;
};

SeriesIdentityResult series_identity_check(double p_ratio_sq, double tol);

// Debug dump: one CSV row per retained nonzero entry, columns n, mu, c.
std::string table_to_csv(const CoefficientTable& table);

}  // namespace dicke
