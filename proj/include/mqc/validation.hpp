#pragma once

#include "mqc/run_config.hpp"

#include <map>
#include <string>
#include <vector>

namespace mqc {

struct CriterionResult {
    std::string id;        // "1", "2a", ...
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
    double seconds = 0.0;
};

struct ValidationOptions {
    double tolerance_scale = 1.0;
    // per-criterion multipliers on top of tolerance_scale, keyed by id
    std::map<std::string, double> tolerance_overrides;
    std::size_t mc_samples = 100000;
    int oracle_directions = 10;
    std::uint64_t seed = 1;
    // subset of criterion groups to run ("1".."9"); empty runs all
    std::vector<std::string> only;
};

struct ValidationReport {
    std::vector<CriterionResult> results;
    std::uint64_t seed = 1;
    bool all_passed() const;
    std::string text() const;
    std::string json() const;
};

ValidationReport run_validation(const ValidationOptions& options);

}  // namespace mqc
