#include "lambda_cavity.h"

#include "lambdacav/config.hpp"
#include "lambdacav/runner.hpp"

#include <cstring>
#include <sstream>
#include <string>

struct lmc_run_config {
    lambdacav::RunConfig config;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message)
{
    g_last_error = message;
}

lmc_status map_exception()
{
    try {
        throw;
    } catch (const lambdacav::ConfigError& e) {
        set_error(e.what());
        return LMC_ERR_CONFIG;
    } catch (const lambdacav::SolverError& e) {
        set_error(e.what());
        return LMC_ERR_SOLVER;
    } catch (const std::exception& e) {
        set_error(e.what());
        return LMC_ERR_SOLVER;
    } catch (...) {
        set_error("unknown error");
        return LMC_ERR_SOLVER;
    }
}

std::string complex_string(lambdacav::cd v)
{
    std::string out = lambdacav::format_value(v.real());
    if (v.imag() != 0.0) {
        if (v.imag() > 0.0)
            out += "+";
        out += lambdacav::format_value(v.imag()) + "i";
    }
    return out;
}

std::string grid_string(const lambdacav::GridSpec& g)
{
    return lambdacav::format_value(g.start) + "," + lambdacav::format_value(g.stop) + "," +
           std::to_string(g.count);
}

bool get_value(const lambdacav::RunConfig& c, const std::string& key, std::string& out)
{
    using lambdacav::format_value;
    if (key == "g0")
        out = complex_string(c.params.g0);
    else if (key == "g1")
        out = complex_string(c.params.g1);
    else if (key == "kappa")
        out = format_value(c.params.kappa);
    else if (key == "omega10")
        out = format_value(c.params.omega10);
    else if (key == "delta")
        out = format_value(c.params.delta);
    else if (key == "nbar")
        out = format_value(c.params.nbar);
    else if (key == "interference")
        out = format_value(c.params.interference);
    else if (key == "mode") {
        switch (c.mode) {
        case lambdacav::RunMode::steady: out = "steady"; break;
        case lambdacav::RunMode::sweep: out = "sweep"; break;
        case lambdacav::RunMode::spectrum: out = "spectrum"; break;
        case lambdacav::RunMode::trap: out = "trap"; break;
        case lambdacav::RunMode::validate: out = "validate"; break;
        }
    } else if (key == "equation") {
        switch (c.equation) {
        case lambdacav::EquationChoice::reduced: out = "reduced"; break;
        case lambdacav::EquationChoice::approx: out = "approx"; break;
        case lambdacav::EquationChoice::full: out = "full"; break;
        }
    } else if (key == "delta_grid")
        out = grid_string(c.delta_grid);
    else if (key == "omega_grid")
        out = grid_string(c.omega_grid);
    else if (key == "t_stop")
        out = format_value(c.t_stop);
    else if (key == "t_count")
        out = std::to_string(c.t_count);
    else if (key == "initial_state")
        out = c.initial_state;
    else if (key == "n_max")
        out = std::to_string(c.n_max);
    else if (key == "mu0")
        out = format_value(c.probe.mu0);
    else if (key == "mu1")
        out = format_value(c.probe.mu1);
    else if (key == "kernel_tol")
        out = format_value(c.kernel_tol);
    else if (key == "output_path")
        out = c.output_path;
    else
        return false;
    return true;
}

} // namespace

extern "C" {

const char* lmc_version(void)
{
    return "1.0.0";
}

lmc_run_config* lmc_config_new(void)
{
    return new lmc_run_config{};
}

void lmc_config_free(lmc_run_config* config)
{
    delete config;
}

lmc_status lmc_config_load(lmc_run_config* config, const char* text)
{
    if (!config || !text) {
        set_error("lmc_config_load: null argument");
        return LMC_ERR_CONFIG;
    }
    try {
        config->config = lambdacav::parse_config(text);
        return LMC_OK;
    } catch (...) {
        return map_exception();
    }
}

lmc_status lmc_config_set(lmc_run_config* config, const char* key, const char* value)
{
    if (!config || !key || !value) {
        set_error("lmc_config_set: null argument");
        return LMC_ERR_CONFIG;
    }
    try {
        lambdacav::set_key(config->config, key, value, 0);
        return LMC_OK;
    } catch (...) {
        return map_exception();
    }
}

lmc_status lmc_config_get(const lmc_run_config* config, const char* key, char* buffer,
                          size_t buffer_size)
{
    if (!config || !key || !buffer || buffer_size == 0) {
        set_error("lmc_config_get: null argument");
        return LMC_ERR_CONFIG;
    }
    std::string value;
    if (!get_value(config->config, key, value)) {
        set_error(std::string("lmc_config_get: unknown key '") + key + "'");
        return LMC_ERR_CONFIG;
    }
    std::strncpy(buffer, value.c_str(), buffer_size - 1);
    buffer[buffer_size - 1] = '\0';
    return LMC_OK;
}

lmc_status lmc_run(const lmc_run_config* config, const char* output_path)
{
    if (!config) {
        set_error("lmc_run: null configuration");
        return LMC_ERR_CONFIG;
    }
    std::string message;
    const int code =
        lambdacav::run(config->config, output_path ? output_path : "", &message);
    if (code != lambdacav::exit_ok)
        set_error(message.empty() ? "run failed" : message);
    switch (code) {
    case lambdacav::exit_ok:
        return LMC_OK;
    case lambdacav::exit_config_error:
        return LMC_ERR_CONFIG;
    case lambdacav::exit_validation_failure:
        return LMC_ERR_VALIDATION;
    case lambdacav::exit_io_error:
        return LMC_ERR_IO;
    default:
        return LMC_ERR_SOLVER;
    }
}

const char* lmc_last_error(void)
{
    return g_last_error.c_str();
}

} // extern "C"
