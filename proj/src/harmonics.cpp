#include "dicke/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dicke/numeric.hpp"

namespace dicke {

namespace {

// exp(-i mu theta) for even mu = 0, 2, ..., cut; slot mu/2.
std::vector<std::complex<double>> even_phases(double theta, int cut) {
    std::vector<std::complex<double>> pha(static_cast<std::size_t>(cut / 2) + 1);
    for (int mu = 0; mu <= cut; mu += 2)
        pha[static_cast<std::size_t>(mu / 2)] =
            std::complex<double>(std::cos(mu * theta), -std::sin(mu * theta));
    return pha;
}

std::complex<double> amplitude_dot(const std::vector<double>& row,
                                   const std::vector<double>& ground, int cut,
                                   const std::vector<std::complex<double>>& pha) {
    CompensatedSum re, im;
    int hi = std::min<int>(cut, static_cast<int>(row.size()) - 1);
    for (int mu = 0; mu <= hi; mu += 2) {
        double w = row[static_cast<std::size_t>(mu)] * ground[static_cast<std::size_t>(mu)];
        const auto& ph = pha[static_cast<std::size_t>(mu / 2)];
        re.add(w * ph.real());
        im.add(w * ph.imag());
    }
    return {re.value(), im.value()};
}

// F(m,t) from a population vector; n runs over even indices with n + m in range.
double weight_from_pops(const std::vector<double>& pop, int m, int n_limit) {
    if (m % 2 != 0) return 0.0;
    CompensatedSum acc;
    for (int n = 0; n + m <= n_limit; n += 2)
        acc.add(pop[static_cast<std::size_t>(n + m)] * pop[static_cast<std::size_t>(n)]);
    return acc.value();
}

struct MomentSums {
    double total_f = 0.0;
    double total_m2f = 0.0;
    double last_f = 0.0;
    double prev_f = 0.0;
};

MomentSums moment_sums(const std::vector<double>& pop, int n_limit, int m_max) {
    MomentSums s;
    CompensatedSum f_acc, m2_acc;
    for (int m = 0; m <= m_max; m += 2) {
        double f = weight_from_pops(pop, m, n_limit);
        f_acc.add(f);
        m2_acc.add(double(m) * double(m) * f);
        s.prev_f = s.last_f;
        s.last_f = f;
    }
    s.total_f = f_acc.value();
    s.total_m2f = m2_acc.value();
    return s;
}

}  // namespace

SurvivalAmplitudes survival_amplitudes(const CoefficientTable& table, double e1, double t) {
    SurvivalAmplitudes out;
    out.g.assign(static_cast<std::size_t>(table.n_max) + 1, {0.0, 0.0});
    auto pha = even_phases(e1 * t, table.ground_cut);
    // Odd rows have no overlap with the even-index ground row.
    for (int n = 0; n <= table.n_max; n += 2)
        out.g[static_cast<std::size_t>(n)] =
            amplitude_dot(table.c[static_cast<std::size_t>(n)], table.c[0], table.ground_cut, pha);
    return out;
}

double harmonics_weight(const CoefficientTable& table, double e1, int m, double t) {
    if (m < 0) throw std::invalid_argument("harmonic index must be nonnegative");
    if (m % 2 != 0) return 0.0;
    SurvivalAmplitudes amps = survival_amplitudes(table, e1, t);
    std::vector<double> pop(amps.g.size());
    for (std::size_t i = 0; i < amps.g.size(); ++i) pop[i] = std::norm(amps.g[i]);
    return weight_from_pops(pop, m, table.n_max);
}

double harmonics_weight_direct(const CoefficientTable& table, double e1, int m, double t) {
    if (m < 0) throw std::invalid_argument("harmonic index must be nonnegative");
    double theta = e1 * t;
    const std::vector<double>& g0 = table.c[0];
    int cut = table.ground_cut;
    CompensatedSum total;
    for (int n = 0; n + m <= table.n_max; ++n) {
        const std::vector<double>& row_nm = table.c[static_cast<std::size_t>(n + m)];
        const std::vector<double>& row_n = table.c[static_cast<std::size_t>(n)];
        CompensatedSum re, im;
        for (int mu = 0; mu <= cut; ++mu) {
            double wl = row_nm[static_cast<std::size_t>(mu)] * g0[static_cast<std::size_t>(mu)];
            if (wl == 0.0) continue;
            for (int nu = 0; nu <= cut; ++nu) {
                double w = wl * g0[static_cast<std::size_t>(nu)] *
                           row_n[static_cast<std::size_t>(nu)];
                if (w == 0.0) continue;
                double ang = double(mu - nu) * theta;
                re.add(w * std::cos(ang));
                im.add(-w * std::sin(ang));
            }
        }
        double a = re.value(), b = im.value();
        total.add(a * a + b * b);
    }
    return total.value();
}

SecondMoment second_moment(const CoefficientTable& table, double e1, double t, int m_max) {
    if (m_max < 1) throw std::invalid_argument("m_max must be at least 1");
    if (m_max > table.n_max)
        throw std::invalid_argument("m_max exceeds the table row range");

    SurvivalAmplitudes amps = survival_amplitudes(table, e1, t);
    std::vector<double> pop(amps.g.size());
    for (std::size_t i = 0; i < amps.g.size(); ++i) pop[i] = std::norm(amps.g[i]);

    MomentSums s = moment_sums(pop, table.n_max, m_max);
    SecondMoment out;
    if (s.total_f <= 0.0) throw std::runtime_error("second_moment: vanishing weight sum");
    out.value = s.total_m2f / s.total_f;

    // Geometric tail estimate from the last two retained weights; ignored
    // while the edge terms sit at the rounding floor.
    double edge = double(m_max) * double(m_max) * s.last_f;
    if (edge > 1e-12 * std::max(s.total_m2f, 1e-300)) {
        if (s.prev_f > 0.0 && s.last_f > 0.0) {
            double r = s.last_f / s.prev_f;
            if (r >= 0.999)
                throw std::runtime_error(
                    "second_moment: m-sum not converging at cap m_max = " +
                    std::to_string(m_max) + ", edge weight " + sci12(s.last_f));
            double tail = edge * r / ((1.0 - r) * (1.0 - r));
            out.tail_fraction = tail / (s.total_m2f + tail);
        } else {
            out.tail_fraction = edge / (s.total_m2f + edge);
        }
        out.converged = out.tail_fraction <= 1e-8;
    }
    return out;
}

std::vector<double> q_distribution(const CoefficientTable& table, double e1, double t,
                                   int m_max) {
    if (m_max < 1) throw std::invalid_argument("m_max must be at least 1");
    if (m_max > table.n_max)
        throw std::invalid_argument("m_max exceeds the table row range");

    SurvivalAmplitudes amps = survival_amplitudes(table, e1, t);
    std::vector<double> pop(amps.g.size());
    for (std::size_t i = 0; i < amps.g.size(); ++i) pop[i] = std::norm(amps.g[i]);

    std::vector<double> q(static_cast<std::size_t>(m_max) + 1, 0.0);
    CompensatedSum norm;
    for (int m = 0; m <= m_max; m += 2) {
        double f = weight_from_pops(pop, m, table.n_max);
        q[static_cast<std::size_t>(m)] = f;
        norm.add(f);
    }
    double total = norm.value();
    if (total <= 0.0) throw std::runtime_error("q_distribution: vanishing weight sum");
    for (double& v : q) v /= total;
    return q;
}

std::vector<double> peak_times(double e1, std::span<const int> k_list) {
    if (!(e1 > 0.0)) throw std::invalid_argument("peak times require a positive mode energy");
    std::vector<double> t;
    t.reserve(k_list.size());
    for (int k : k_list) {
        if (k < 1 || k % 2 == 0)
            throw std::invalid_argument("peak index must be odd and positive; even k are minima");
        t.push_back(double(k) * std::numbers::pi / (2.0 * e1));
    }
    return t;
}

double period(double e1) {
    if (!(e1 > 0.0)) throw std::invalid_argument("period requires a positive mode energy");
    return std::numbers::pi / e1;
}

double amplitude_Ap(const CoefficientTable& table, double e1) {
    int m_max = table.n_max / 2;
    if (m_max % 2 != 0) --m_max;
    if (m_max < 2) throw std::invalid_argument("table too shallow for an amplitude estimate");
    double tp = std::numbers::pi / (2.0 * e1);
    return second_moment(table, e1, tp, m_max).value;
}

// ---------------------------------------------------------------------------
// Streaming evaluator

HarmonicsEvaluator::HarmonicsEvaluator(const BogoliubovPair& pair, double e1)
    : HarmonicsEvaluator(pair, e1, Options()) {}

HarmonicsEvaluator::HarmonicsEvaluator(const BogoliubovPair& pair, double e1, Options opt)
    : ground_(ground_row(pair, opt.tol, opt.mu_cap)), e1_(e1), opt_(opt) {
    if (!(e1 > 0.0)) throw std::invalid_argument("mode energy must be positive");
    report_.ground_cut = ground_.cut;
    report_.ground_tail = ground_.tail_mass;

    CompensatedSum mass;
    for (int mu = 0; mu <= ground_.cut; mu += 2)
        mass.add(ground_.c[static_cast<std::size_t>(mu)] * ground_.c[static_cast<std::size_t>(mu)]);
    mass_total_ = mass.value();

    // W_j = sum_nu c_nu^2 c_{nu+2j}^2 feeds the positive-definite form
    // 1 - M(t) = sum_j W_j 4 sin^2(j e1 t) / mass^2, exact at small angles.
    pair_weights_.assign(static_cast<std::size_t>(ground_.cut / 2) + 1, 0.0);
    for (int j = 1; 2 * j <= ground_.cut; ++j) {
        CompensatedSum acc;
        for (int mu = 0; mu + 2 * j <= ground_.cut; mu += 2) {
            double a = ground_.c[static_cast<std::size_t>(mu)];
            double b = ground_.c[static_cast<std::size_t>(mu + 2 * j)];
            acc.add(a * a * b * b);
        }
        pair_weights_[static_cast<std::size_t>(j)] = acc.value();
    }

    if (opt_.n_fixed > 0 && opt_.m_fixed > 0) {
        report_.n_sum = opt_.n_fixed;
        report_.m_max = opt_.m_fixed % 2 == 0 ? opt_.m_fixed : opt_.m_fixed + 1;
        converged_ = true;
    }
}

HarmonicsEvaluator::Populations HarmonicsEvaluator::populations(std::span<const double> times,
                                                                int n_total) const {
    Populations out;
    out.pop.assign(times.size(),
                   std::vector<double>(static_cast<std::size_t>(n_total) + 1, 0.0));
    out.echo.assign(times.size(), 0.0);

    for (std::size_t j = 0; j < times.size(); ++j) {
        double theta = e1_ * times[j];
        auto pha = even_phases(theta, ground_.cut);
        std::complex<double> s = amplitude_dot(ground_.c, ground_.c, ground_.cut, pha);
        out.echo[j] = std::norm(s);

        CompensatedSum defect;
        for (int jj = 1; 2 * jj <= ground_.cut; ++jj) {
            double sn = std::sin(double(jj) * theta);
            defect.add(pair_weights_[static_cast<std::size_t>(jj)] * 4.0 * sn * sn);
        }
        double eps = defect.value() / (mass_total_ * mass_total_);
        eps = std::clamp(eps, 0.0, 1.0);
        double m = 1.0 - eps;
        double tau = std::clamp(eps * (2.0 - eps), 0.0, 1.0);

        std::vector<double>& p = out.pop[j];
        double v = m;
        p[0] = v;
        for (int k = 1; 2 * k <= n_total; ++k) {
            v *= tau * double(2 * k - 1) / double(2 * k);
            p[static_cast<std::size_t>(2 * k)] = v;
        }
    }
    return out;
}

double HarmonicsEvaluator::moment_from_pops(const std::vector<double>& pop, int n_sum,
                                            int m_max) const {
    CompensatedSum f_acc, m2_acc;
    for (int m = 0; m <= m_max; m += 2) {
        CompensatedSum acc;
        for (int n = 0; n <= n_sum; n += 2)
            acc.add(pop[static_cast<std::size_t>(n + m)] * pop[static_cast<std::size_t>(n)]);
        double f = acc.value();
        f_acc.add(f);
        m2_acc.add(double(m) * double(m) * f);
    }
    double total = f_acc.value();
    if (total <= 0.0) throw std::runtime_error("harmonics: vanishing weight sum");
    return m2_acc.value() / total;
}

const ConvergenceReport& HarmonicsEvaluator::converge(std::span<const double> times) {
    if (converged_) return report_;
    if (times.empty()) throw std::invalid_argument("empty time grid");

    // Probe where the angle e1 t sits closest to pi/2 modulo pi: the most
    // demanding point of the breathing cycle within the requested grid.
    double half_pi = std::numbers::pi / 2.0;
    double best_t = times[0];
    double best_d = std::numeric_limits<double>::infinity();
    for (double t : times) {
        double phase = std::fmod(e1_ * t, std::numbers::pi);
        if (phase < 0.0) phase += std::numbers::pi;
        double d = std::abs(phase - half_pi);
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
    }

    const double probe[1] = {best_t};
    double prev = std::numeric_limits<double>::quiet_NaN();
    int side = opt_.start;
    int doublings = 0;
    for (;;) {
        int n_total = 2 * side;
        Populations pops = populations(probe, n_total);
        double m2 = moment_from_pops(pops.pop[0], side, side);
        if (!std::isnan(prev)) {
            double scale = std::max(std::abs(m2), 1e-30);
            if (std::abs(m2 - prev) <= opt_.rel_change * scale ||
                (std::abs(m2) < 1e-20 && std::abs(prev) < 1e-20)) {
                report_.n_sum = side;
                report_.m_max = side;
                report_.doublings = doublings;
                converged_ = true;
                return report_;
            }
        }
        prev = m2;
        if (side >= opt_.side_cap)
            throw std::runtime_error("harmonics cutoffs did not converge below the cap " +
                                     std::to_string(opt_.side_cap));
        side *= 2;
        ++doublings;
    }
}

HarmonicsResult HarmonicsEvaluator::evaluate(std::span<const double> times,
                                             std::span<const double> q_times) const {
    if (!converged_) throw std::logic_error("evaluate called before converge");
    HarmonicsResult out;
    out.times.assign(times.begin(), times.end());
    out.m_max = report_.m_max;
    out.report = report_;

    int n_total = report_.n_sum + report_.m_max;
    if (!times.empty()) {
        Populations pops = populations(times, n_total);
        out.second_moment.resize(times.size());
        out.echo.resize(times.size());
        for (std::size_t j = 0; j < times.size(); ++j) {
            out.second_moment[j] = moment_from_pops(pops.pop[j], report_.n_sum, report_.m_max);
            out.echo[j] = pops.echo[j];
        }
    }
    if (!q_times.empty()) {
        Populations pops = populations(q_times, n_total);
        out.q_times.assign(q_times.begin(), q_times.end());
        out.q_rows.resize(q_times.size());
        for (std::size_t j = 0; j < q_times.size(); ++j) {
            std::vector<double> q(static_cast<std::size_t>(report_.m_max) + 1, 0.0);
            CompensatedSum norm;
            for (int m = 0; m <= report_.m_max; m += 2) {
                CompensatedSum acc;
                for (int n = 0; n <= report_.n_sum; n += 2)
                    acc.add(pops.pop[j][static_cast<std::size_t>(n + m)] *
                            pops.pop[j][static_cast<std::size_t>(n)]);
                q[static_cast<std::size_t>(m)] = acc.value();
                norm.add(acc.value());
            }
            double total = norm.value();
            if (total <= 0.0) throw std::runtime_error("harmonics: vanishing weight sum");
            for (double& v : q) v /= total;
            out.q_rows[j] = std::move(q);
        }
    }
    return out;
}

double HarmonicsEvaluator::second_moment_at(double t) const {
    if (!converged_) throw std::logic_error("second_moment_at called before converge");
    const double one[1] = {t};
    Populations pops = populations(one, report_.n_sum + report_.m_max);
    return moment_from_pops(pops.pop[0], report_.n_sum, report_.m_max);
}

double HarmonicsEvaluator::echo_at(double t) const {
    const double one[1] = {t};
    Populations pops = populations(one, 0);
    return pops.echo[0];
}

double HarmonicsEvaluator::amplitude() const {
    return second_moment_at(std::numbers::pi / (2.0 * e1_));
}

}  // namespace dicke
