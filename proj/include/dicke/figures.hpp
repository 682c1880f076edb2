#pragma once

#include <span>
#include <string>
#include <vector>

#include "dicke/fit.hpp"
#include "dicke/harmonics.hpp"
#include "dicke/scenario.hpp"

namespace dicke {

inline constexpr const char* kToolVersion = "1.0.0";

std::vector<double> uniform_grid(double dt, double t_max);
std::vector<double> log_grid(double lo, double hi, int count);

// Time evolution of the second moment and the echo for one resolved quench.
struct EvolveResult {
    ResolvedQuench quench;
    HarmonicsResult series;
    std::vector<std::pair<double, double>> echo_minima;  // analytic t_p, numeric M_L
};

EvolveResult run_evolve(const ScenarioConfig& cfg, std::span<const double> q_times = {});

// One row of the eta scan: oscillation amplitude plus echo/fidelity columns,
// numeric next to closed form.
struct ScalingRow {
    double eta = 0.0;
    double ap = 0.0;
    double mp_numeric = 0.0;
    double mp_closed = 0.0;
    double lp_numeric = 0.0;
    double lp_closed = 0.0;
};

struct ScalingScan {
    std::vector<ScalingRow> rows;
    FitResult power_fit;
    bool fit_valid = false;
};

ScalingScan run_scaling(const ScenarioConfig& cfg, std::span<const double> eta_grid);

// Echo-harmonics relation data: protocol A sweeps time at fixed eta,
// protocol B sweeps eta at fixed time.
struct RelationRow {
    char protocol = 'A';
    double eta = 0.0;
    double t = 0.0;
    double m2 = 0.0;
    double ml = 0.0;
    double eps = 0.0;  // coupling step lambda - lambda0 of this row's quench
};

struct RelationScan {
    std::vector<RelationRow> rows;
    FitResult fit;
    double collapse_max_dml = 0.0;  // max |Delta M_L| between the protocols
};

RelationScan run_relation(const ScenarioConfig& cfg);

// A_p for one eta across several lambda0 values (and their mirrors when
// both phases are requested); returns the values and the relative spread.
struct CollapseResult {
    std::vector<double> ap;
    double max_relative_spread = 0.0;
};

CollapseResult scaling_collapse(const ScenarioConfig& cfg, double eta,
                                std::span<const double> lambda0_list);

// Writes the data files and a gnuplot script for figure 1..5 into out_dir;
// returns the paths written. Output bytes depend only on the configuration.
std::vector<std::string> reproduce_figure(const ScenarioConfig& cfg, int figure,
                                          const std::string& out_dir);

}  // namespace dicke
