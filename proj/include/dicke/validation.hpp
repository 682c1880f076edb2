#pragma once

#include <string>
#include <vector>

#include "dicke/output.hpp"
#include "dicke/scenario.hpp"

namespace dicke {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // worst observed deviation (or figure of merit)
    double threshold = 0.0;  // limit the value is held against
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    ordered_json diagnostics;  // cutoffs and tail masses of the tables used
    bool all_pass() const;
};

// Runs every invariant suite: closed-form identities, oracle equivalence,
// periodicity, and the scaling collapse. Honors the config's tol and its
// mmax hint (interpreted as the coefficient-basis cap, so a deliberately
// tiny value forces the truncation checks to fail).
ValidationReport run_validation(const ScenarioConfig& cfg);

std::string render_validation_json(const ValidationReport& report, const ScenarioConfig& cfg);

}  // namespace dicke
