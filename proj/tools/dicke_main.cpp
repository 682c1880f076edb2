// dicke: command-line front end for the Dicke-model QPT toolkit.
// Exit codes: 0 success, 1 validation/runtime failure, 2 configuration error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dicke/echo.hpp"
#include "dicke/figures.hpp"
#include "dicke/numeric.hpp"
#include "dicke/output.hpp"
#include "dicke/scenario.hpp"
#include "dicke/validation.hpp"

namespace {

using namespace dicke;

struct CliOpts {
    std::string config;
    std::optional<double> omega, omega0, lambda, lambda0, eta, tmax, dt, tol;
    std::optional<int> mmax, nmax, threads;
    std::optional<std::string> phase, bogoliubov, out, format;
};

void add_common_options(CLI::App* cmd, CliOpts& o) {
    cmd->add_option("--config", o.config, "flat JSON config file; flags override its values");
    cmd->add_option("--omega", o.omega, "field-mode frequency");
    cmd->add_option("--omega0", o.omega0, "atomic level splitting");
    cmd->add_option("--lambda", o.lambda, "evolution coupling");
    cmd->add_option("--lambda0", o.lambda0, "preparation coupling");
    cmd->add_option("--eta", o.eta, "scaling ratio (lambda-lambda_c)/(lambda0-lambda_c)");
    cmd->add_option("--phase", o.phase, "normal|superradiant (default lambda0 side in eta mode)");
    cmd->add_option("--bogoliubov", o.bogoliubov, "asymptotic|exact coefficient mode");
    cmd->add_option("--tmax", o.tmax, "time-grid end");
    cmd->add_option("--dt", o.dt, "time-grid step");
    cmd->add_option("--tol", o.tol, "ground-row tail tolerance, in (0, 1e-4]");
    cmd->add_option("--mmax", o.mmax, "harmonic cutoff hint; validate treats it as the basis cap");
    cmd->add_option("--nmax", o.nmax, "excitation cutoff hint");
    cmd->add_option("--out", o.out, "output path");
    cmd->add_option("--format", o.format, "csv|json");
    cmd->add_option("--threads", o.threads, "worker threads (default: DICKE_THREADS or hardware)");
}

ScenarioConfig build_config(const CliOpts& o) {
    ScenarioConfig cfg = o.config.empty() ? ScenarioConfig{} : load_config_file(o.config);
    if (o.omega) cfg.omega = *o.omega;
    if (o.omega0) cfg.omega0 = *o.omega0;
    if (o.lambda) cfg.lambda = *o.lambda;
    if (o.lambda0) cfg.lambda0 = *o.lambda0;
    if (o.eta) cfg.eta = *o.eta;
    if (o.phase) cfg.phase = parse_phase(*o.phase);
    if (o.bogoliubov) cfg.bogoliubov = parse_bogoliubov(*o.bogoliubov);
    if (o.tmax) cfg.t_max = *o.tmax;
    if (o.dt) cfg.dt = *o.dt;
    if (o.tol) cfg.tol = *o.tol;
    if (o.mmax) cfg.m_max_hint = *o.mmax;
    if (o.nmax) cfg.n_max_hint = *o.nmax;
    if (o.out) cfg.out_path = *o.out;
    if (o.format) cfg.format = parse_format(*o.format);
    return cfg;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> vals;
    if (text.empty()) throw ConfigError("empty grid");
    try {
        if (text.find(':') != std::string::npos) {
            double lo, hi;
            int count;
            if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3)
                throw ConfigError("grid spec must be min:max:count");
            if (count < 1 || (count > 1 && !(hi > lo)))
                throw ConfigError("bad grid spec: " + text);
            for (int i = 0; i < count; ++i)
                vals.push_back(count == 1 ? lo : lo + (hi - lo) * double(i) / double(count - 1));
        } else {
            std::size_t pos = 0;
            while (pos < text.size()) {
                std::size_t next = text.find(',', pos);
                if (next == std::string::npos) next = text.size();
                std::string token = text.substr(pos, next - pos);
                std::size_t used = 0;
                double v = std::stod(token, &used);
                if (used != token.size()) throw ConfigError("bad grid value: " + token);
                vals.push_back(v);
                pos = next + 1;
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse grid: " + text);
    }
    if (vals.empty()) throw ConfigError("empty grid");
    return vals;
}

struct Column {
    std::string name;
    std::vector<std::string> cells;  // preformatted
    std::vector<double> values;      // kept for the JSON emitter
    bool numeric = true;
};

Column num_column(std::string name, std::vector<double> values) {
    Column c;
    c.name = std::move(name);
    c.values = std::move(values);
    for (double v : c.values) c.cells.push_back(sci12(v));
    return c;
}

Column text_column(std::string name, std::vector<std::string> cells) {
    Column c;
    c.name = std::move(name);
    c.cells = std::move(cells);
    c.numeric = false;
    return c;
}

std::string output_path(const ScenarioConfig& cfg, const std::string& stem) {
    if (!cfg.out_path.empty()) return cfg.out_path;
    return stem + (cfg.format == OutputFormat::Json ? ".json" : ".csv");
}

std::string sibling_path(const std::string& main_path, const std::string& suffix) {
    std::filesystem::path p(main_path);
    std::string ext = p.extension().string();
    p.replace_extension();
    return p.string() + suffix + ext;
}

void emit_table(const ScenarioConfig& cfg, const std::string& path,
                const std::vector<Column>& cols, const ordered_json& extra_meta) {
    if (cols.empty()) throw ConfigError("nothing to emit");
    if (cfg.format == OutputFormat::Json) {
        ordered_json doc;
        doc["meta"] = config_meta(cfg);
        doc["meta"]["version"] = kToolVersion;
        for (auto it = extra_meta.begin(); it != extra_meta.end(); ++it)
            doc["meta"][it.key()] = it.value();
        ordered_json data = ordered_json::object();
        for (const Column& c : cols) {
            if (c.numeric)
                data[c.name] = c.values;
            else
                data[c.name] = c.cells;
        }
        doc["data"] = data;
        write_text_file(path, dump_json12(doc));
    } else {
        std::vector<std::string> names;
        for (const Column& c : cols) names.push_back(c.name);
        CsvTable table(names);
        std::size_t rows = cols[0].cells.size();
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<std::string> row;
            for (const Column& c : cols) row.push_back(c.cells[r]);
            table.add_row_text(row);
        }
        write_text_file(path, table.str());
    }
    std::cout << path << "\n";
}

int cmd_spectrum(const ScenarioConfig& cfg, const std::string& grid_text) {
    validate_common(cfg);
    std::vector<double> grid = parse_grid(grid_text);
    std::sort(grid.begin(), grid.end());
    ModelParams p = model_params(cfg);
    double lc = critical_coupling(p);

    std::vector<double> e1s, e2s, etas;
    std::vector<std::string> phases;
    bool with_eta = cfg.lambda0.has_value();
    for (double lam : grid) {
        EffectiveSpectrum s = mode_energies(p, lam);
        e1s.push_back(s.e1);
        e2s.push_back(s.e2);
        phases.push_back(phase_name(s.phase));
        if (with_eta) {
            double d = lam - lc, d0 = *cfg.lambda0 - lc;
            etas.push_back(d0 != 0.0 && d != 0.0 && (d > 0.0) == (d0 > 0.0)
                               ? d / d0
                               : std::numeric_limits<double>::quiet_NaN());
        }
    }

    std::vector<Column> cols;
    cols.push_back(num_column("lambda[energy]", grid));
    cols.push_back(text_column("phase", phases));
    cols.push_back(num_column("e1[energy]", e1s));
    cols.push_back(num_column("e2[energy]", e2s));
    if (with_eta) cols.push_back(num_column("eta[1]", etas));

    ordered_json meta;
    meta["lambda_c"] = lc;
    emit_table(cfg, output_path(cfg, "spectrum"), cols, meta);
    return 0;
}

int cmd_evolve(const ScenarioConfig& cfg, const std::string& q_times_text) {
    std::vector<double> q_times;
    if (!q_times_text.empty()) q_times = parse_grid(q_times_text);
    EvolveResult res = run_evolve(cfg, q_times);

    ordered_json meta;
    meta["lambda"] = res.quench.lambda;
    meta["lambda0"] = res.quench.lambda0;
    meta["eta_resolved"] = res.quench.eta;
    meta["e1"] = res.quench.e1;
    meta["period"] = period(res.quench.e1);
    meta["n_sum"] = res.series.report.n_sum;
    meta["m_max"] = res.series.report.m_max;
    meta["ground_cut"] = res.series.report.ground_cut;
    meta["ground_tail"] = res.series.report.ground_tail;
    meta["max_row_tail"] = res.series.report.max_row_tail;
    ordered_json minima = ordered_json::array();
    for (auto& [tp, mp] : res.echo_minima)
        minima.push_back(ordered_json{{"t_p", tp}, {"m_l", mp}});
    meta["echo_minima"] = minima;

    std::vector<Column> cols;
    cols.push_back(num_column("t[1/energy]", res.series.times));
    cols.push_back(num_column("m2[1]", res.series.second_moment));
    cols.push_back(num_column("ml[1]", res.series.echo));
    std::string path = output_path(cfg, "evolve");
    emit_table(cfg, path, cols, meta);

    if (!res.series.q_times.empty()) {
        std::vector<double> qt, qm, qv;
        for (std::size_t j = 0; j < res.series.q_times.size(); ++j)
            for (int m = 0; m < static_cast<int>(res.series.q_rows[j].size()); m += 2) {
                qt.push_back(res.series.q_times[j]);
                qm.push_back(double(m));
                qv.push_back(res.series.q_rows[j][static_cast<std::size_t>(m)]);
            }
        std::vector<Column> qcols;
        qcols.push_back(num_column("t[1/energy]", qt));
        qcols.push_back(num_column("m[1]", qm));
        qcols.push_back(num_column("q[1]", qv));
        emit_table(cfg, sibling_path(path, "_q"), qcols, ordered_json::object());
    }
    return 0;
}

int cmd_scaling(const ScenarioConfig& cfg, double eta_min, double eta_max, int eta_count) {
    if (!(eta_min > 0.0) || !(eta_max >= eta_min) || eta_count < 1)
        throw ConfigError("bad eta grid");
    std::vector<double> grid = eta_count == 1 ? std::vector<double>{eta_min}
                                              : log_grid(eta_min, eta_max, eta_count);
    ScalingScan scan = run_scaling(cfg, grid);

    std::vector<double> etas, aps, mpn, mpc, lpn, lpc;
    for (const ScalingRow& r : scan.rows) {
        etas.push_back(r.eta);
        aps.push_back(r.ap);
        mpn.push_back(r.mp_numeric);
        mpc.push_back(r.mp_closed);
        lpn.push_back(r.lp_numeric);
        lpc.push_back(r.lp_closed);
    }
    std::vector<Column> cols;
    cols.push_back(num_column("eta[1]", etas));
    cols.push_back(num_column("ap[1]", aps));
    cols.push_back(num_column("mp_numeric[1]", mpn));
    cols.push_back(num_column("mp_closed[1]", mpc));
    cols.push_back(num_column("lp_numeric[1]", lpn));
    cols.push_back(num_column("lp_closed[1]", lpc));

    ordered_json meta;
    if (scan.fit_valid) {
        meta["fit_a"] = scan.power_fit.a;
        meta["fit_b"] = scan.power_fit.b;
        meta["fit_residual"] = scan.power_fit.residual;
        meta["fit_points"] = scan.power_fit.n_points;
    }
    std::string path = output_path(cfg, "scaling");
    emit_table(cfg, path, cols, meta);

    if (scan.fit_valid) {
        std::vector<Column> fcols;
        fcols.push_back(num_column("a[1]", {scan.power_fit.a}));
        fcols.push_back(num_column("b[1]", {scan.power_fit.b}));
        fcols.push_back(num_column("rms_log_residual[1]", {scan.power_fit.residual}));
        fcols.push_back(num_column("n_points[1]", {double(scan.power_fit.n_points)}));
        emit_table(cfg, sibling_path(path, "_fit"), fcols, ordered_json::object());
    }
    return 0;
}

int cmd_relation(const ScenarioConfig& cfg) {
    RelationScan scan = run_relation(cfg);

    std::vector<std::string> protocols;
    std::vector<double> etas, ts, m2s, mls, rel_pred, quad_pred;
    for (const RelationRow& r : scan.rows) {
        protocols.emplace_back(1, r.protocol);
        etas.push_back(r.eta);
        ts.push_back(r.t);
        m2s.push_back(r.m2);
        mls.push_back(r.ml);
        rel_pred.push_back(le_harmonics_relation(r.m2));
        quad_pred.push_back(le_quadratic_prediction(r.m2, r.eps));
    }
    std::vector<Column> cols;
    cols.push_back(text_column("protocol", protocols));
    cols.push_back(num_column("eta[1]", etas));
    cols.push_back(num_column("t[1/energy]", ts));
    cols.push_back(num_column("m2[1]", m2s));
    cols.push_back(num_column("ml[1]", mls));
    cols.push_back(num_column("ml_relation_pred[1]", rel_pred));
    cols.push_back(num_column("ml_quadratic_pred[1]", quad_pred));

    ordered_json meta;
    meta["fit_a"] = scan.fit.a;
    meta["fit_b"] = scan.fit.b;
    meta["fit_residual"] = scan.fit.residual;
    meta["collapse_max_dml"] = scan.collapse_max_dml;
    std::string path = output_path(cfg, "relation");
    emit_table(cfg, path, cols, meta);

    std::vector<Column> fcols;
    fcols.push_back(num_column("a[1]", {scan.fit.a}));
    fcols.push_back(num_column("b[1]", {scan.fit.b}));
    fcols.push_back(num_column("rms_residual[1]", {scan.fit.residual}));
    fcols.push_back(num_column("n_points[1]", {double(scan.fit.n_points)}));
    fcols.push_back(num_column("collapse_max_dml[1]", {scan.collapse_max_dml}));
    emit_table(cfg, sibling_path(path, "_fit"), fcols, ordered_json::object());
    return 0;
}

int cmd_validate(const ScenarioConfig& cfg) {
    ValidationReport report = run_validation(cfg);
    std::string doc = render_validation_json(report, cfg);
    if (!cfg.out_path.empty()) {
        write_text_file(cfg.out_path, doc);
        std::cout << cfg.out_path << "\n";
    } else {
        std::cout << doc;
    }
    for (const CheckResult& c : report.checks)
        std::cerr << (c.pass ? "pass " : "FAIL ") << c.name
                  << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    return report.all_pass() ? 0 : 1;
}

int cmd_reproduce(const ScenarioConfig& cfg, int figure, const std::string& out_dir) {
    std::vector<std::string> files = reproduce_figure(cfg, figure, out_dir);
    for (const std::string& f : files) std::cout << f << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dicke-model QPT toolkit: Wigner-function harmonics, Loschmidt echo, fidelity"};
    app.require_subcommand(1);

    CliOpts opts;
    std::string lambda_grid, q_times, out_dir = ".";
    double eta_min = 0.01, eta_max = 0.4;
    int eta_count = 12, figure = 0;

    CLI::App* spectrum = app.add_subcommand("spectrum", "mode energies over a coupling grid");
    add_common_options(spectrum, opts);
    spectrum->add_option("--lambda-grid", lambda_grid,
                         "couplings: comma-separated values or min:max:count")
        ->required();

    CLI::App* evolve = app.add_subcommand("evolve", "second moment and echo time series");
    add_common_options(evolve, opts);
    evolve->add_option("--q-times", q_times, "emit Q(m,t) rows at these times");

    CLI::App* scaling = app.add_subcommand("scaling", "A_p, M_p, L_p over an eta grid with fit");
    add_common_options(scaling, opts);
    scaling->add_option("--eta-min", eta_min, "eta grid start (log-spaced)");
    scaling->add_option("--eta-max", eta_max, "eta grid end");
    scaling->add_option("--eta-count", eta_count, "eta grid size");

    CLI::App* relation = app.add_subcommand("relation", "echo-harmonics relation protocols and fit");
    add_common_options(relation, opts);

    CLI::App* validate = app.add_subcommand("validate", "run every invariant suite");
    add_common_options(validate, opts);

    CLI::App* reproduce = app.add_subcommand("reproduce", "emit data and plot script for a figure");
    add_common_options(reproduce, opts);
    reproduce->add_option("--figure", figure, "figure number 1..5")->required();
    reproduce->add_option("--outdir", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ScenarioConfig cfg = build_config(opts);
        if (spectrum->parsed()) return cmd_spectrum(cfg, lambda_grid);
        if (evolve->parsed()) return cmd_evolve(cfg, q_times);
        if (scaling->parsed()) return cmd_scaling(cfg, eta_min, eta_max, eta_count);
        if (relation->parsed()) return cmd_relation(cfg);
        if (validate->parsed()) return cmd_validate(cfg);
        if (reproduce->parsed()) return cmd_reproduce(cfg, figure, out_dir);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const dicke::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
