#pragma once

#include <string>
#include <vector>

namespace lcsde {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Exit codes shared by the runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;                // human-readable status or error
    std::vector<std::string> outputs;   // files written, manifest last
};

// Loads, validates and dispatches an experiment config. Writes a run
// manifest plus mode-specific outputs into the configured directory;
// partial outputs are removed when the run fails.
RunOutcome run_experiment(const std::string& config_path);

// Reads a solve-mode report JSON and writes the tidy plotting tables
// (<stem>_rates.csv, <stem>_modulus.csv) next to it.
RunOutcome export_report(const std::string& report_path);

} // namespace lcsde
