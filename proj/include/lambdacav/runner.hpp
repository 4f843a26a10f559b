// runner.hpp — executes a validated RunConfig: dispatches the requested
// mode, writes deterministic CSV output (12 significant digits, LF line
// endings), and maps error classes onto process exit codes.

#pragma once

#include "lambdacav/config.hpp"

#include <string>

namespace lambdacav {

// Exit codes shared by the runner, the C API, and the CLI.
enum ExitCode {
    exit_ok = 0,
    exit_config_error = 2,
    exit_solver_error = 3,
    exit_validation_failure = 4,
    exit_io_error = 5,
};

// Runs the configuration; out_override (when non-empty) replaces
// config.output_path. Returns an ExitCode; on failure the message is
// stored in *error_message when provided.
int run(const RunConfig& config, const std::string& out_override = "",
        std::string* error_message = nullptr);

// Default output file for a mode ("sweep.csv", "validation_report.json", ...).
std::string default_output_path(RunMode mode);

// "%.12g" rendering used for every CSV value.
std::string format_value(double v);

} // namespace lambdacav
