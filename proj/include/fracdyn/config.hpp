#pragma once

#include <string>
#include <vector>

namespace fracdyn::cli {

/// Validated run configuration. Expressions stay as source strings here and
/// are parsed when a command needs them.
struct RunConfig {
    double alpha = 0.5;  // required in the config file
    double p = 2.0;
    double T = 1.0;
    int N = 32;
    double beta = 1.0;
    std::string r = "1";
    std::string F = "0";
    std::string phi = "0";
    std::string psi = "0";

    double h = 1e-3;
    double tol = 1e-8;
    int max_iter = 200;

    // kamke command parameters
    double lambda = 1.0;
    double H = 1.0;
    std::vector<double> eps_list = {1e-2, 1e-3, 1e-4, 1e-5};

    // sweep command parameters
    std::vector<int> N_list = {8, 16, 32};
};

/// Parses and validates a JSON config. Error messages carry the offending
/// field path.
RunConfig parse_config(const std::string& json_text);

}  // namespace fracdyn::cli
