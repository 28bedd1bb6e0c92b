#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "padam/harness.hpp"

namespace padam {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Settings for the compare subcommand: the p arms under comparison and the
// step-size tuning grid (entries are scaled by 1/sqrt(T)).
struct CompareConfig {
    std::vector<double> p_arms = {0.125, 0.25, 0.5};
    std::vector<double> alpha_grid = {0.5, 0.2, 0.1, 0.05, 0.02};  // scaled by 1/sqrt(T)
};

// Settings for the verify subcommand's diagnostic matrix.
struct VerifyConfig {
    long T = 200;
    std::vector<int> dims = {1, 10, 100};
    std::vector<double> p_values = {0.0, 0.125, 0.25, 0.5};
    std::vector<double> beta1_values = {0.0, 0.5, 0.9};
};

struct RunConfig {
    int schema_version = 1;
    ExperimentSpec spec;
    CompareConfig compare;
    VerifyConfig verify;
    std::string output_dir = "out";
    bool emit_report_json = true;
    bool emit_csv = true;
};

// Strict parse: unknown keys are rejected at every level and every error
// message names the offending key. Throws ConfigError.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace padam
