#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "dicke/model.hpp"
#include "dicke/output.hpp"

namespace dicke {

// Configuration problems map to CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class BogoliubovMode { Asymptotic, Exact };
enum class OutputFormat { Csv, Json };

struct ScenarioConfig {
    double omega = 1.0;
    double omega0 = 1.0;
    std::optional<double> eta;      // eta-specified mode
    std::optional<double> lambda;   // lambda-pair mode
    std::optional<double> lambda0;
    Phase phase = Phase::Normal;    // selects the default lambda0 in eta mode
    BogoliubovMode bogoliubov = BogoliubovMode::Asymptotic;
    double t_max = 0.0;
    double dt = 0.0;
    double tol = 1e-12;
    int m_max_hint = 0;  // fixes the harmonic cutoff; validate uses it as the basis cap
    int n_max_hint = 0;
    std::string out_path;
    OutputFormat format = OutputFormat::Csv;
    int threads = 0;
};

// Flat key-value JSON document; unknown keys are rejected.
ScenarioConfig load_config_file(const std::string& path);

ModelParams model_params(const ScenarioConfig& cfg);

void validate_common(const ScenarioConfig& cfg);
void validate_time_grid(const ScenarioConfig& cfg);
void validate_quench(const ScenarioConfig& cfg);

// The coupling pair a command operates on, with the Bogoliubov coefficients
// resolved according to the configured mode.
struct ResolvedQuench {
    double lambda = 0.0;
    double lambda0 = 0.0;
    double eta = 0.0;
    double lambda_c = 0.0;
    double e1 = 0.0;  // mode energy at lambda
    Phase phase = Phase::Normal;
    BogoliubovPair pair{};
};

ResolvedQuench resolve_quench(const ScenarioConfig& cfg);

// Config echo for "meta" blocks of emitted files.
ordered_json config_meta(const ScenarioConfig& cfg);

Phase parse_phase(const std::string& s);
BogoliubovMode parse_bogoliubov(const std::string& s);
OutputFormat parse_format(const std::string& s);
std::string phase_name(Phase p);

inline constexpr double kDefaultLambda0Offset = 1e-3;

}  // namespace dicke
