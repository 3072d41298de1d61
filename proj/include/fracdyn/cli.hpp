#pragma once

#include <string>
#include <vector>

#include "fracdyn/config.hpp"

namespace fracdyn::cli {

/// Shortest round-trip decimal rendering of a double, used for all CSV and
/// report output so identical runs produce byte-identical files.
std::string format_double(double v);

/// Executes one command with the given configuration, writing artifacts
/// under out_dir. Returns the process exit code: 0 on success. Contract
/// violations and non-convergence surface as exceptions for the caller to
/// map (1 and 2 respectively); partially written outputs are removed first.
int run(const std::string& command, const RunConfig& config, const std::string& out_dir);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// The full acceptance battery, one result per criterion.
std::vector<CriterionResult> run_acceptance();

/// Prints one pass/fail line per criterion; returns 0 iff all pass.
int print_acceptance(const std::vector<CriterionResult>& results);

}  // namespace fracdyn::cli
