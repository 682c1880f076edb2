#include "dicke/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dicke/numeric.hpp"

namespace dicke {

namespace {

double ratio_sq(const BogoliubovPair& pair) {
    if (pair.p2 == 0.0) throw std::invalid_argument("degenerate pair: p2 = 0");
    double r = pair.p1 / pair.p2;
    return r * r;
}

}  // namespace

GroundRow ground_row(const BogoliubovPair& pair, double tol, int mu_cap, int min_cut) {
    if (!(tol > 0.0) || tol >= 1.0) throw std::invalid_argument("tail tolerance out of range");
    if (mu_cap < 0) throw std::invalid_argument("negative basis cap");

    double pr = ratio_sq(pair);
    if (pr >= 1.0)
        throw std::invalid_argument("non-convergent ground-row series: (p1/p2)^2 >= 1");

    GroundRow row;
    if (pair.p1 == 0.0) {
        row.c.assign(1, 1.0);
        row.cut = 0;
        row.tail_mass = 0.0;
        return row;
    }

    // Unnormalized recursion u_mu = -(p1 sqrt(mu-1)) / (p2 sqrt(mu)) u_{mu-2};
    // the term-mass ratio approaches (p1/p2)^2 from below, so the geometric
    // bound on the dropped mass is rigorous.
    double step = -pair.p1 / pair.p2;
    std::vector<double> u{1.0};
    CompensatedSum mass;
    mass.add(1.0);

    int start = std::max(64, min_cut);
    int stage = std::min(start, std::max(2, mu_cap));
    int mu = 0;
    double tail_fraction = 1.0;
    for (;;) {
        while (mu + 2 <= stage) {
            double next = step * std::sqrt(double(mu + 1) / double(mu + 2)) * u.back();
            u.push_back(0.0);
            u.push_back(next);
            mass.add(next * next);
            mu += 2;
        }
        double partial = mass.value();
        double tail_bound = u.back() * u.back() * pr / (1.0 - pr);
        tail_fraction = tail_bound / (partial + tail_bound);
        if (tail_fraction <= tol) {
            double norm = std::sqrt(partial + tail_bound);
            row.c.resize(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) row.c[i] = u[i] / norm;
            row.cut = mu;
            row.tail_mass = tail_fraction;
            return row;
        }
        if (stage >= mu_cap)
            throw TruncationError("ground_row: tolerance " + sci12(tol) +
                                      " unreachable at basis cap " + std::to_string(mu_cap) +
                                      ", achieved tail " + sci12(tail_fraction),
                                  tail_fraction);
        stage = std::min(mu_cap, stage * 2);
    }
}

int ladder_safe_cut(const BogoliubovPair& pair, int n_target, double target_log10) {
    double pr = ratio_sq(pair);
    if (pr == 0.0 || n_target <= 0) return 0;
    if (pr >= 1.0)
        throw std::invalid_argument("non-convergent ground-row series: (p1/p2)^2 >= 1");
    // Dropped-edge amplitude ~ pr^(cut/4); an n-step ladder amplifies it by
    // at most p2^n sqrt(binom(cut+n, n)).
    double n = double(n_target);
    double target = target_log10 * std::numbers::ln10;
    for (int cut = 64;; cut += 32) {
        double ln_err = 0.25 * cut * std::log(pr) + n * std::log(std::abs(pair.p2)) +
                        0.5 * (std::lgamma(cut + n + 1.0) - std::lgamma(cut + 1.0) -
                               std::lgamma(n + 1.0));
        if (ln_err < target) return cut;
        if (cut >= kGroundBasisCap)
            throw TruncationError("ladder_safe_cut: no admissible basis depth below the cap",
                                  std::exp(ln_err));
    }
}

CoefficientTable make_table(const BogoliubovPair& pair, double tol, int mu_cap) {
    return make_table(pair, tol, mu_cap, 0);
}

CoefficientTable make_table(const BogoliubovPair& pair, double tol, int mu_cap, int min_cut) {
    CoefficientTable t;
    t.pair = pair;
    t.p_ratio_sq = ratio_sq(pair);
    t.tol = tol;
    t.mu_cap = mu_cap;

    GroundRow g = ground_row(pair, tol, mu_cap, min_cut);
    t.ground_cut = g.cut;
    t.mu_max = g.cut;
    t.n_max = 0;
    t.c.push_back(std::move(g.c));
    t.row_tail_mass.push_back(g.tail_mass);
    return t;
}

void ladder_extend(CoefficientTable& table, int n_target, double eps_row) {
    if (table.c.empty()) throw std::logic_error("ladder_extend: ground row missing");
    if (n_target <= table.n_max) return;

    // Row n has exact support up to ground_cut + n; keep that many columns
    // unless the basis cap forces clipping.
    int want_mu = table.ground_cut + n_target;
    if (want_mu % 2 != 0) ++want_mu;
    int new_mu = std::min(want_mu, table.mu_cap);
    if (new_mu > table.mu_max) {
        table.mu_max = new_mu;
        for (auto& row : table.c) row.resize(static_cast<std::size_t>(new_mu) + 1, 0.0);
    }

    std::size_t width = static_cast<std::size_t>(table.mu_max) + 1;
    double p1 = table.pair.p1;
    double p2 = table.pair.p2;

    for (int n = table.n_max; n < n_target; ++n) {
        const std::vector<double>& cur = table.c[static_cast<std::size_t>(n)];
        std::vector<double> next(width, 0.0);
        double inv = 1.0 / std::sqrt(double(n + 1));
        CompensatedSum norm;
        for (std::size_t mu = 0; mu < width; ++mu) {
            double up = (mu + 1 < width) ? p1 * std::sqrt(double(mu + 1)) * cur[mu + 1] : 0.0;
            double down = (mu >= 1) ? p2 * std::sqrt(double(mu)) * cur[mu - 1] : 0.0;
            double v = (up + down) * inv;
            next[mu] = v;
            norm.add(v * v);
        }
        // Both a mass deficit and a mass excess signal broken truncation: an
        // excess is the ladder-amplified image of the dropped ground tail.
        double drift = std::abs(1.0 - norm.value());
        if (drift > eps_row)
            throw TruncationError("ladder_extend: row " + std::to_string(n + 1) +
                                      " norm drift " + sci12(drift) +
                                      " exceeds limit; increase mu_max or deepen the basis",
                                  drift);
        table.c.push_back(std::move(next));
        table.row_tail_mass.push_back(std::max(0.0, 1.0 - norm.value()));
        table.n_max = n + 1;
    }
}

CoefficientTable build_table(const BogoliubovPair& pair, double tol, int n_target,
                             int mu_cap, double eps_row) {
    // The safe-depth estimate tracks a single raising chain; same-sign path
    // multiplicity can push the realized drift past it, so retry deeper while
    // that helps. Once the drift stops shrinking it is rounding-seeded, not
    // tail-seeded, and no basis depth can repair it: the ladder has a hard
    // depth limit in double precision.
    int min_cut = std::min(ladder_safe_cut(pair, n_target), mu_cap);
    double last_drift = std::numeric_limits<double>::infinity();
    for (;;) {
        CoefficientTable t = make_table(pair, tol, mu_cap, min_cut);
        try {
            ladder_extend(t, n_target, eps_row);
            return t;
        } catch (const TruncationError& e) {
            if (min_cut >= mu_cap || e.achieved_tail > 0.5 * last_drift) throw;
            last_drift = e.achieved_tail;
            min_cut = std::min(mu_cap, min_cut + std::max(64, min_cut / 2));
        }
    }
}

std::vector<double> closed_form_ground_weights(double p_ratio_sq, int mu_max) {
    if (p_ratio_sq < 0.0 || p_ratio_sq >= 1.0)
        throw std::invalid_argument("weight parameter must lie in [0, 1)");
    if (mu_max < 0) throw std::invalid_argument("negative basis cutoff");

    std::vector<double> w(static_cast<std::size_t>(mu_max) + 1, 0.0);
    w[0] = std::sqrt(1.0 - p_ratio_sq);
    if (p_ratio_sq == 0.0) return w;

    // ln D_mu = ln D_{mu-2} + ln(mu-1) - ln(mu), D_mu = (mu-1)!!/mu!!
    double log_d = 0.0;
    double log_p = std::log(p_ratio_sq);
    double log_norm = 0.5 * std::log(1.0 - p_ratio_sq);
    for (int mu = 2; mu <= mu_max; mu += 2) {
        log_d += std::log(double(mu - 1)) - std::log(double(mu));
        w[static_cast<std::size_t>(mu)] = std::exp(0.5 * mu * log_p + log_d + log_norm);
    }
    return w;
}

std::string table_to_csv(const CoefficientTable& table) {
    std::string out = "n[1],mu[1],c[1]\n";
    for (int n = 0; n <= table.n_max; ++n) {
        const std::vector<double>& row = table.c[static_cast<std::size_t>(n)];
        for (std::size_t mu = 0; mu < row.size(); ++mu) {
            if (row[mu] == 0.0) continue;
            out += std::to_string(n);
            out += ',';
            out += std::to_string(mu);
            out += ',';
            out += sci12(row[mu]);
            out += '\n';
        }
    }
    return out;
}

SeriesIdentityResult series_identity_check(double p_ratio_sq, double tol) {
    if (p_ratio_sq < 0.0 || p_ratio_sq >= 1.0)
        throw std::invalid_argument("series parameter must lie in [0, 1)");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

    CompensatedSum plain;
    CompensatedSum alternating;
    plain.add(1.0);
    alternating.add(1.0);

    double term = 1.0;
    double sign = 1.0;
    int k = 0;
    constexpr int kMaxTerms = 20000000;
    while (term >= tol && k < kMaxTerms) {
        ++k;
        term *= p_ratio_sq * double(2 * k - 1) / double(2 * k);
        sign = -sign;
        plain.add(term);
        alternating.add(sign * term);
    }
    if (k >= kMaxTerms)
        throw std::runtime_error("series_identity_check: term budget exhausted");

    SeriesIdentityResult r;
    r.plain_sum = plain.value();
    r.alternating_sum = alternating.value();
    r.plain_residual = std::abs(r.plain_sum - 1.0 / std::sqrt(1.0 - p_ratio_sq));
    r.alternating_residual = std::abs(r.alternating_sum - 1.0 / std::sqrt(1.0 + p_ratio_sq));
    r.terms = k + 1;
    return r;
}

}  // namespace dicke
