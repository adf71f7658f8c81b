#pragma once

#include <functional>
#include <string>
#include <vector>

namespace cbs {

struct CriterionResult {
    std::string id;
    bool passed = false;
    std::vector<std::string> measured;  // "name=value" entries, deterministic
    std::string detail;                 // first failing check, if any
    double seconds = 0.0;
    double limit_seconds = 0.0;
};

struct AcceptanceOptions {
    int threads = 1;
};

std::vector<std::string> acceptance_ids();

// Throws std::invalid_argument for an unknown id.
CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& opt);

std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& ids, const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// "A1 PASS ..." one-line summary.
std::string format_result_line(const CriterionResult& r);
// Machine-readable report; timings are the only non-deterministic fields.
std::string acceptance_report_json(const std::vector<CriterionResult>& results);

}  // namespace cbs
