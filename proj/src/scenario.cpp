#include "dicke/scenario.hpp"

#include <cmath>
#include <fstream>

namespace dicke {

Phase parse_phase(const std::string& s) {
    if (s == "normal") return Phase::Normal;
    if (s == "superradiant") return Phase::Superradiant;
    throw ConfigError("unknown phase: " + s + " (expected normal|superradiant)");
}

BogoliubovMode parse_bogoliubov(const std::string& s) {
    if (s == "asymptotic") return BogoliubovMode::Asymptotic;
    if (s == "exact") return BogoliubovMode::Exact;
    throw ConfigError("unknown bogoliubov mode: " + s + " (expected asymptotic|exact)");
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError("unknown format: " + s + " (expected csv|json)");
}

std::string phase_name(Phase p) {
    switch (p) {
        case Phase::Normal: return "normal";
        case Phase::Critical: return "critical";
        case Phase::Superradiant: return "superradiant";
    }
    return "unknown";
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(f);
    } catch (const std::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a flat JSON object");

    ScenarioConfig cfg;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        const ordered_json& v = it.value();
        try {
            if (key == "omega") cfg.omega = v.get<double>();
            else if (key == "omega0") cfg.omega0 = v.get<double>();
            else if (key == "eta") cfg.eta = v.get<double>();
            else if (key == "lambda") cfg.lambda = v.get<double>();
            else if (key == "lambda0") cfg.lambda0 = v.get<double>();
            else if (key == "phase") cfg.phase = parse_phase(v.get<std::string>());
            else if (key == "bogoliubov") cfg.bogoliubov = parse_bogoliubov(v.get<std::string>());
            else if (key == "tmax") cfg.t_max = v.get<double>();
            else if (key == "dt") cfg.dt = v.get<double>();
            else if (key == "tol") cfg.tol = v.get<double>();
            else if (key == "mmax") cfg.m_max_hint = v.get<int>();
            else if (key == "nmax") cfg.n_max_hint = v.get<int>();
            else if (key == "out") cfg.out_path = v.get<std::string>();
            else if (key == "format") cfg.format = parse_format(v.get<std::string>());
            else if (key == "threads") cfg.threads = v.get<int>();
            else throw ConfigError("unknown config key: " + key);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("bad value for config key " + key + ": " + e.what());
        }
    }
    return cfg;
}

ModelParams model_params(const ScenarioConfig& cfg) {
    return ModelParams{cfg.omega, cfg.omega0};
}

void validate_common(const ScenarioConfig& cfg) {
    if (!(cfg.omega > 0.0) || !(cfg.omega0 > 0.0))
        throw ConfigError("omega and omega0 must be positive");
    if (!(cfg.tol > 0.0) || cfg.tol > 1e-4)
        throw ConfigError("tol must lie in (0, 1e-4]");
    if (cfg.m_max_hint < 0 || cfg.n_max_hint < 0)
        throw ConfigError("cutoff hints must be nonnegative");
    if (cfg.threads < 0) throw ConfigError("threads must be nonnegative");
}

void validate_time_grid(const ScenarioConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(cfg.t_max > 0.0)) throw ConfigError("tmax must be positive");
    if (cfg.t_max / cfg.dt > 5e6) throw ConfigError("time grid too fine: over 5e6 points");
}

void validate_quench(const ScenarioConfig& cfg) {
    bool eta_mode = cfg.eta.has_value();
    bool pair_mode = cfg.lambda.has_value();
    if (eta_mode == pair_mode)
        throw ConfigError("exactly one of eta or lambda must be given");
    if (eta_mode && !(*cfg.eta > 0.0)) throw ConfigError("eta must be positive");
    if (pair_mode && !cfg.lambda0.has_value())
        throw ConfigError("lambda mode requires lambda0");
}

ResolvedQuench resolve_quench(const ScenarioConfig& cfg) {
    validate_common(cfg);
    validate_quench(cfg);
    ModelParams p = model_params(cfg);
    ResolvedQuench q;
    q.lambda_c = critical_coupling(p);

    if (cfg.eta.has_value()) {
        double offset = cfg.phase == Phase::Superradiant ? kDefaultLambda0Offset
                                                         : -kDefaultLambda0Offset;
        q.lambda0 = cfg.lambda0.value_or(q.lambda_c + offset);
        try {
            q.lambda = lambda_for_eta(p, *cfg.eta, q.lambda0);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    } else {
        q.lambda = *cfg.lambda;
        q.lambda0 = *cfg.lambda0;
    }

    try {
        ScalingRatio ratio = scaling_eta(q.lambda, q.lambda0, q.lambda_c);
        q.eta = ratio.eta;
        q.phase = classify_phase(p, q.lambda);
        q.e1 = mode_energies(p, q.lambda).e1;
        q.pair = cfg.bogoliubov == BogoliubovMode::Exact
                     ? bogoliubov_exact(p, q.lambda0, q.lambda)
                     : bogoliubov_asymptotic(ratio);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    return q;
}

ordered_json config_meta(const ScenarioConfig& cfg) {
    ordered_json m;
    m["omega"] = cfg.omega;
    m["omega0"] = cfg.omega0;
    if (cfg.eta) m["eta"] = *cfg.eta;
    if (cfg.lambda) m["lambda"] = *cfg.lambda;
    if (cfg.lambda0) m["lambda0"] = *cfg.lambda0;
    m["phase"] = phase_name(cfg.phase);
    m["bogoliubov"] = cfg.bogoliubov == BogoliubovMode::Exact ? "exact" : "asymptotic";
    if (cfg.t_max > 0.0) m["tmax"] = cfg.t_max;
    if (cfg.dt > 0.0) m["dt"] = cfg.dt;
    m["tol"] = cfg.tol;
    if (cfg.m_max_hint > 0) m["mmax"] = cfg.m_max_hint;
    if (cfg.n_max_hint > 0) m["nmax"] = cfg.n_max_hint;
    m["format"] = cfg.format == OutputFormat::Json ? "json" : "csv";
    return m;
}

}  // namespace dicke
