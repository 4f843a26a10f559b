// config.hpp — flat key=value run configuration for the command-line
// front end. Unknown keys are rejected; every error names the offending
// key and line.

#pragma once

#include "lambdacav/analysis.hpp"
#include "lambdacav/model.hpp"

#include <string>

namespace lambdacav {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, std::string key, int line);

    const std::string& key() const { return key_; }
    int line() const { return line_; }

private:
    std::string key_;
    int line_;
};

enum class RunMode { steady, sweep, spectrum, trap, validate };

// Generator selection for the CLI; `full` (composite atom + field model)
// is accepted in steady mode only.
enum class EquationChoice { reduced, approx, full };

struct GridSpec {
    double start;
    double stop;
    int count;

    std::vector<double> points() const { return grid_points(start, stop, count); }
};

struct RunConfig {
    ModelParams params;
    RunMode mode = RunMode::steady;
    EquationChoice equation = EquationChoice::reduced;
    GridSpec delta_grid{-400.0, 400.0, 401};
    GridSpec omega_grid{-300.0, 300.0, 1201};
    double t_stop = 10.0;
    int t_count = 1001;
    std::string initial_state = "ket2";
    int n_max = 0; // 0 = auto-select from nbar
    ProbeWeights probe;
    double kernel_tol = 1e-10;
    std::string output_path; // empty = per-mode default
    int threads = 0;         // set from the environment by the runner

    // Initial state resolved against the (final) parameters. Throws
    // ConfigError naming initial_state when invalid.
    DensityMatrix resolve_initial_state() const;
};

// Assigns one key; validates the value in isolation. line is used in
// error messages (0 for command-line overrides).
void set_key(RunConfig& config, const std::string& key, const std::string& value, int line = 0);

// Cross-field validation; call after the last set_key.
void finalize(RunConfig& config);

// '#' comments, blank lines, key = value pairs. Returns the fully
// validated configuration (defaults when text is empty).
RunConfig parse_config(const std::string& text);

// "a", "a+bi", "-bi", ... into a complex number; throws std::invalid_argument.
cd parse_complex(const std::string& text);

} // namespace lambdacav
