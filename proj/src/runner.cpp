#include "lambdacav/runner.hpp"

#include "lambdacav/cavity.hpp"
#include "lambdacav/dynamics.hpp"
#include "lambdacav/validate.hpp"

#include <json.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace lambdacav {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open output file '" + path + "'");
    return out;
}

void finish_output(std::ofstream& out, const std::string& path)
{
    out.flush();
    if (!out)
        throw IoError("failed writing output file '" + path + "'");
}

int env_thread_cap()
{
    const char* env = std::getenv("LAMBDA_CAVITY_THREADS");
    if (!env || !*env)
        return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0)
        return 0;
    return static_cast<int>(v);
}

SweepRow observe_row(double delta, const DensityMatrix& rho)
{
    SweepRow row;
    row.delta = delta;
    row.p22 = rho.population(2);
    row.p11 = rho.population(1);
    row.p00 = rho.population(0);
    row.d20 = row.p22 - row.p00;
    row.d21 = row.p22 - row.p11;
    row.re_coh = rho(0, 1).real();
    row.im_coh = rho(0, 1).imag();
    return row;
}

void write_sweep_rows(std::ofstream& out, const std::vector<SweepRow>& rows)
{
    out << "delta,d20,d21,re_coh,im_coh,p22,p11,p00\n";
    for (const SweepRow& r : rows)
        out << format_value(r.delta) << ',' << format_value(r.d20) << ',' << format_value(r.d21)
            << ',' << format_value(r.re_coh) << ',' << format_value(r.im_coh) << ','
            << format_value(r.p22) << ',' << format_value(r.p11) << ',' << format_value(r.p00)
            << '\n';
}

void run_steady(const RunConfig& config, const std::string& path)
{
    DensityMatrix rho;
    if (config.equation == EquationChoice::full) {
        FockConfig fock;
        fock.n_max = config.n_max;
        const Superoperator gen = build_full_liouvillian(config.params, fock);
        rho = reduce_to_atom(*steady_state(gen).state);
    } else {
        const Equation eq =
            config.equation == EquationChoice::approx ? Equation::approx : Equation::reduced;
        rho = steady_state_direct(build_liouvillian(config.params, eq),
                                  SteadyStateOptions{config.kernel_tol});
    }
    std::ofstream out = open_output(path);
    write_sweep_rows(out, {observe_row(config.params.delta, rho)});
    finish_output(out, path);
}

void run_sweep(const RunConfig& config, const std::string& path)
{
    const Equation eq =
        config.equation == EquationChoice::approx ? Equation::approx : Equation::reduced;
    const SweepResult sweep = detuning_sweep(config.params, config.delta_grid.points(), eq,
                                             config.threads,
                                             SteadyStateOptions{config.kernel_tol});
    std::ofstream out = open_output(path);
    write_sweep_rows(out, sweep.rows);
    finish_output(out, path);
}

void run_spectrum(const RunConfig& config, const std::string& path)
{
    const Equation eq =
        config.equation == EquationChoice::approx ? Equation::approx : Equation::reduced;
    const SpectrumResult spec =
        absorption_spectrum(config.params, config.probe, config.omega_grid.points(), eq,
                            config.threads, SteadyStateOptions{config.kernel_tol});
    std::ofstream out = open_output(path);
    out << "omega,a_on,a_off\n";
    for (const SpectrumRow& r : spec.rows)
        out << format_value(r.omega) << ',' << format_value(r.a_on) << ','
            << format_value(r.a_off) << '\n';
    finish_output(out, path);
}

void run_trap(const RunConfig& config, const std::string& path)
{
    const Equation eq =
        config.equation == EquationChoice::approx ? Equation::approx : Equation::reduced;
    const Superoperator gen = build_liouvillian(config.params, eq);
    const DensityMatrix rho0 = config.resolve_initial_state();

    const double dt = config.t_stop / (config.t_count - 1);
    const Matrix propagator = (gen.dense() * dt).exp();
    Vector state = vectorize(rho0.matrix());

    std::ofstream out = open_output(path);
    out << "t,p22,pSS,pAA\n";
    for (int i = 0; i < config.t_count; ++i) {
        const DensityMatrix rho(devectorize(state, 3));
        const DensityMatrix sa = sa_transform(config.params, rho);
        out << format_value(i * dt) << ',' << format_value(sa.population(2)) << ','
            << format_value(sa.population(0)) << ',' << format_value(sa.population(1)) << '\n';
        state = propagator * state;
    }
    finish_output(out, path);
}

int run_validate(const RunConfig& config, const std::string& path)
{
    const std::vector<CheckResult> results = run_acceptance_suite(config.threads);
    nlohmann::json report;
    report["checks"] = nlohmann::json::array();
    int failed = 0;
    for (const CheckResult& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.name
                  << " -- " << r.details << "\n";
        report["checks"].push_back(
            {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
        if (!r.pass)
            ++failed;
    }
    report["total"] = static_cast<int>(results.size());
    report["failed"] = failed;
    report["all_pass"] = failed == 0;
    std::ofstream out = open_output(path);
    out << report.dump(2) << '\n';
    finish_output(out, path);
    std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed")
              << "\n";
    return failed == 0 ? exit_ok : exit_validation_failure;
}

} // namespace

std::string format_value(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string default_output_path(RunMode mode)
{
    switch (mode) {
    case RunMode::steady:
        return "steady.csv";
    case RunMode::sweep:
        return "sweep.csv";
    case RunMode::spectrum:
        return "spectrum.csv";
    case RunMode::trap:
        return "trap.csv";
    case RunMode::validate:
        return "validation_report.json";
    }
    return "out.csv";
}

int run(const RunConfig& config_in, const std::string& out_override, std::string* error_message)
{
    RunConfig config = config_in;
    if (config.threads == 0)
        config.threads = env_thread_cap();
    const std::string path =
        !out_override.empty()
            ? out_override
            : (!config.output_path.empty() ? config.output_path
                                           : default_output_path(config.mode));
    try {
        finalize(config);
        switch (config.mode) {
        case RunMode::steady:
            run_steady(config, path);
            return exit_ok;
        case RunMode::sweep:
            run_sweep(config, path);
            return exit_ok;
        case RunMode::spectrum:
            run_spectrum(config, path);
            return exit_ok;
        case RunMode::trap:
            run_trap(config, path);
            return exit_ok;
        case RunMode::validate:
            return run_validate(config, path);
        }
        return exit_solver_error;
    } catch (const ConfigError& e) {
        if (error_message)
            *error_message = e.what();
        return exit_config_error;
    } catch (const IoError& e) {
        if (error_message)
            *error_message = e.what();
        return exit_io_error;
    } catch (const SolverError& e) {
        if (error_message)
            *error_message = e.what();
        return exit_solver_error;
    } catch (const std::exception& e) {
        if (error_message)
            *error_message = e.what();
        return exit_solver_error;
    }
}

} // namespace lambdacav
