#include "dicke/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "dicke/echo.hpp"
#include "dicke/figures.hpp"
#include "dicke/fit.hpp"
#include "dicke/harmonics.hpp"
#include "dicke/numeric.hpp"
#include "dicke/oracle.hpp"

namespace dicke {

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

namespace {

struct Ctx {
    ScenarioConfig cfg;
    ModelParams p;
    double lc;
    int mu_cap;
    ordered_json diagnostics;
};

using CheckFn = std::function<CheckResult(Ctx&)>;

CheckResult guard(const std::string& name, Ctx& ctx, double threshold,
                  const std::function<double(Ctx&)>& body) {
    CheckResult r;
    r.name = name;
    r.threshold = threshold;
    try {
        r.value = body(ctx);
        r.pass = r.value <= threshold;
        if (!r.pass) r.detail = "deviation above threshold";
    } catch (const std::exception& e) {
        r.pass = false;
        r.value = std::numeric_limits<double>::infinity();
        r.detail = e.what();
    }
    return r;
}

CoefficientTable table_for(Ctx& ctx, double eta, int n_target) {
    BogoliubovPair pair = bogoliubov_asymptotic(eta);
    return build_table(pair, ctx.cfg.tol, n_target, ctx.mu_cap);
}

double check_bogoliubov_canonical(Ctx& ctx) {
    double worst = 0.0;
    const double lam0s[] = {0.35, 0.4, 0.45, 0.49, 0.55, 0.6, 0.7};
    const double lams[] = {0.3, 0.42, 0.47, 0.499, 0.52, 0.65, 0.9};
    for (int i = 0; i < 7; ++i) {
        if (classify_phase(ctx.p, lams[i]) != classify_phase(ctx.p, lam0s[i])) continue;
        BogoliubovPair b = bogoliubov_exact(ctx.p, lam0s[i], lams[i]);
        worst = std::max(worst, std::abs(b.p2 * b.p2 - b.p1 * b.p1 - 1.0));
    }
    return worst;
}

double check_mode_energy_closed_form(Ctx& ctx) {
    double worst = 0.0;
    for (double lam : {0.0, 0.1, 0.2, 0.3, 0.4, 0.45, 0.49}) {
        double e1 = mode_energies(ctx.p, lam).e1;
        double ref = std::sqrt(ctx.p.omega * ctx.p.omega - 2.0 * lam * ctx.p.omega);
        if (ref > 0.0) worst = std::max(worst, std::abs(e1 - ref) / ref);
    }
    worst = std::max(worst, mode_energies(ctx.p, ctx.lc).e1);
    return worst;
}

double check_e1_monotonic(Ctx& ctx) {
    double prev = mode_energies(ctx.p, 0.0).e1;
    for (int i = 1; i <= 40; ++i) {
        double lam = ctx.lc * double(i) / 40.0;
        double e1 = mode_energies(ctx.p, lam).e1;
        if (e1 >= prev) return 1.0;
        prev = e1;
    }
    prev = 0.0;
    for (int i = 1; i <= 40; ++i) {
        double lam = ctx.lc * (1.0 + double(i) / 40.0);
        double e1 = mode_energies(ctx.p, lam).e1;
        if (e1 <= prev) return 1.0;
        prev = e1;
    }
    return 0.0;
}

double check_williamson(Ctx& ctx) {
    double worst = 0.0;
    for (double lam : {0.0, 0.1, 0.2, 0.3, 0.4, 0.45}) {
        auto [w1, w2] = williamson_frequencies(ctx.p, lam);
        EffectiveSpectrum s = mode_energies(ctx.p, lam);
        worst = std::max(worst, std::abs(w1 - s.e1) / s.e1);
        worst = std::max(worst, std::abs(w2 - s.e2) / s.e2);
    }
    return worst;
}

double check_oracle_rows(Ctx& ctx) {
    const int dim = 240;
    const int rows = 12;
    CoefficientTable t = table_for(ctx, 0.25, rows);
    DenseOperator op = dense_rotated_number_operator(t.pair, dim);
    EigenDecomposition d = oracle_eigendecomposition(op);
    double worst = 0.0;
    for (int n = 0; n <= rows; ++n) {
        Eigen::VectorXd v = d.vectors.col(n);
        int imax = 0;
        for (int i = 1; i < dim; ++i)
            if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
        double fv = v(imax) < 0.0 ? -1.0 : 1.0;
        const std::vector<double>& row = t.c[static_cast<std::size_t>(n)];
        int jmax = 0;
        for (std::size_t j = 1; j < row.size(); ++j)
            if (std::abs(row[j]) > std::abs(row[static_cast<std::size_t>(jmax)]))
                jmax = static_cast<int>(j);
        double fr = row[static_cast<std::size_t>(jmax)] < 0.0 ? -1.0 : 1.0;
        for (int mu = 0; mu < dim; ++mu) {
            double ref = mu < static_cast<int>(row.size())
                             ? fr * row[static_cast<std::size_t>(mu)]
                             : 0.0;
            worst = std::max(worst, std::abs(fv * v(mu) - ref));
        }
    }
    return worst;
}

double check_oracle_gaps(Ctx& ctx) {
    CoefficientTable t = table_for(ctx, 0.25, 0);
    DenseOperator op = dense_rotated_number_operator(t.pair, 240);
    EigenDecomposition d = oracle_eigendecomposition(op);
    double worst = std::abs(d.values(0));
    for (int n = 1; n < 60; ++n)
        worst = std::max(worst, std::abs(d.values(n) - d.values(n - 1) - 1.0));
    return worst;
}

double check_series_identities(Ctx&) {
    double worst = 0.0;
    for (double pr : {0.1, 0.5, 0.9}) {
        SeriesIdentityResult r = series_identity_check(pr, 1e-15);
        worst = std::max({worst, r.plain_residual, r.alternating_residual});
    }
    return worst;
}

double check_fidelity_identity(Ctx& ctx) {
    double worst = 0.0;
    for (double eta : log_grid(1e-3, 1.0, 6)) {
        CoefficientTable t = table_for(ctx, eta, 0);
        double numeric = fidelity_numeric(t);
        worst = std::max(worst, std::abs(numeric - fidelity_closed(eta)));
        worst = std::max(worst,
                         std::abs(numeric * numeric - std::sqrt(1.0 - t.p_ratio_sq)) * 1e2);
    }
    return worst;
}

double check_echo_minimum(Ctx& ctx) {
    double worst = 0.0;
    for (double eta : {0.1, 0.25}) {
        CoefficientTable t = table_for(ctx, eta, 0);
        double e1 = 1.0;  // minima depend on the phase angle only
        double tp = std::numbers::pi / (2.0 * e1);
        double ml = loschmidt_echo(t, e1, tp);
        double closed = echo_minimum_closed(eta);
        worst = std::max(worst, std::abs(ml - closed) / closed);
    }
    return worst;
}

double check_pipeline_identities(Ctx& ctx) {
    CoefficientTable t = table_for(ctx, 0.25, 64);
    double e1 = 0.7;
    double tp = std::numbers::pi / (2.0 * e1);
    double worst = 0.0;
    for (double time : {0.3, 1.1, tp}) {
        for (int m : {0, 2, 4, 8}) {
            double fact = harmonics_weight(t, e1, m, time);
            double direct = harmonics_weight_direct(t, e1, m, time);
            worst = std::max(worst, std::abs(fact - direct));
        }
        SurvivalAmplitudes amps = survival_amplitudes(t, e1, time);
        std::vector<double> w = density_matrix_harmonics(amps, 20);
        std::vector<double> q = q_distribution(t, e1, time, 20);
        for (int m = 0; m <= 20; ++m)
            worst = std::max(worst, std::abs(w[static_cast<std::size_t>(m)] -
                                             q[static_cast<std::size_t>(m)]));
        double g0 = std::norm(amps.g[0]);
        worst = std::max(worst, std::abs(g0 - loschmidt_echo(t, e1, time)) * 1e2);
    }
    return worst;
}

double check_periodicity(Ctx& ctx) {
    double lambda = ctx.lc - 1e-4;
    double lambda0 = ctx.lc - 1e-3;
    double eta = (lambda - ctx.lc) / (lambda0 - ctx.lc);
    double e1 = mode_energies(ctx.p, lambda).e1;
    double t_period = period(e1);

    BogoliubovPair pair = bogoliubov_asymptotic(eta);
    HarmonicsEvaluator::Options opt;
    opt.tol = ctx.cfg.tol;
    opt.mu_cap = ctx.mu_cap;
    HarmonicsEvaluator ev(pair, e1, opt);
    std::vector<double> times = uniform_grid(t_period / 64.0, 2.0 * t_period);
    ev.converge(times);
    HarmonicsResult res = ev.evaluate(times);

    ctx.diagnostics["periodicity_cutoffs"] = ordered_json{{"n_sum", res.report.n_sum},
                                                          {"m_max", res.report.m_max},
                                                          {"ground_cut", res.report.ground_cut}};

    double ap = ev.amplitude();
    double worst = res.second_moment[0] * 1e6;  // <m^2>_0 against 1e-12 via 1e-6 scale
    std::size_t per = 64;
    for (std::size_t j = 0; j + per < times.size(); ++j)
        worst = std::max(worst, std::abs(res.second_moment[j + per] - res.second_moment[j]) /
                                    std::max(1.0, ap));
    // Even-k times: the series returns to its initial value.
    worst = std::max(worst, res.second_moment[per] / (1e-2 * std::max(1e-300, ap)));
    return worst;
}

double check_scaling_collapse(Ctx& ctx) {
    ScenarioConfig cfg = ctx.cfg;
    cfg.bogoliubov = BogoliubovMode::Exact;
    std::vector<double> lam0s{ctx.lc - 1e-3, ctx.lc - 5e-4, ctx.lc + 1e-3, ctx.lc + 5e-4};
    CollapseResult r = scaling_collapse(cfg, 0.1, lam0s);
    return r.max_relative_spread;
}

double check_truncation_tails(Ctx& ctx) {
    CoefficientTable t = table_for(ctx, 0.1, 32);
    double worst_row = 0.0;
    for (double d : t.row_tail_mass) worst_row = std::max(worst_row, d);
    ctx.diagnostics["table_eta_0.1"] =
        ordered_json{{"mu_max", t.mu_max},
                     {"ground_cut", t.ground_cut},
                     {"ground_tail", t.row_tail_mass[0]},
                     {"max_row_tail", worst_row}};
    if (t.row_tail_mass[0] > ctx.cfg.tol) return 1.0;
    return worst_row;
}

}  // namespace

ValidationReport run_validation(const ScenarioConfig& cfg) {
    validate_common(cfg);
    Ctx ctx{cfg, model_params(cfg), 0.0, kGroundBasisCap, ordered_json::object()};
    ctx.lc = critical_coupling(ctx.p);
    if (cfg.m_max_hint > 0) ctx.mu_cap = cfg.m_max_hint;

    ValidationReport report;
    report.checks.push_back(guard("bogoliubov_canonical", ctx, 1e-12, check_bogoliubov_canonical));
    report.checks.push_back(guard("mode_energy_closed_form", ctx, 1e-14, check_mode_energy_closed_form));
    report.checks.push_back(guard("e1_monotonic", ctx, 0.5, check_e1_monotonic));
    report.checks.push_back(guard("williamson_match", ctx, 1e-10, check_williamson));
    report.checks.push_back(guard("oracle_rows", ctx, 1e-8, check_oracle_rows));
    report.checks.push_back(guard("oracle_gaps", ctx, 1e-8, check_oracle_gaps));
    report.checks.push_back(guard("series_identities", ctx, 1e-12, check_series_identities));
    report.checks.push_back(guard("fidelity_identity", ctx, 1e-8, check_fidelity_identity));
    report.checks.push_back(guard("echo_minimum_closed", ctx, 1e-4, check_echo_minimum));
    report.checks.push_back(guard("pipeline_identities", ctx, 1e-10, check_pipeline_identities));
    report.checks.push_back(guard("periodicity_and_zeros", ctx, 1e-6, check_periodicity));
    report.checks.push_back(guard("scaling_collapse", ctx, 0.02, check_scaling_collapse));
    report.checks.push_back(guard("truncation_tails", ctx, kDefaultRowTailLimit, check_truncation_tails));
    report.diagnostics = std::move(ctx.diagnostics);
    return report;
}

std::string render_validation_json(const ValidationReport& report, const ScenarioConfig& cfg) {
    ordered_json doc;
    doc["meta"] = config_meta(cfg);
    doc["meta"]["version"] = kToolVersion;
    ordered_json checks = ordered_json::array();
    for (const CheckResult& c : report.checks) {
        ordered_json jc;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        jc["value"] = c.value;
        jc["threshold"] = c.threshold;
        if (!c.detail.empty()) jc["detail"] = c.detail;
        checks.push_back(jc);
    }
    doc["checks"] = checks;
    doc["diagnostics"] = report.diagnostics;
    doc["all_pass"] = report.all_pass();
    return dump_json12(doc);
}

}  // namespace dicke
