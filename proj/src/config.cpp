#include "lambdacav/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace lambdacav {

namespace {

std::string trim(const std::string& s)
{
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, int line, const std::string& what)
{
    std::ostringstream msg;
    msg << "config error: " << what << " for key '" << key << "'";
    if (line > 0)
        msg << " (line " << line << ")";
    throw ConfigError(msg.str(), key, line);
}

double parse_double(const std::string& key, int line, const std::string& value)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size() || !std::isfinite(v))
            fail(key, line, "unparsable number '" + value + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail(key, line, "unparsable number '" + value + "'");
    }
}

int parse_int(const std::string& key, int line, const std::string& value)
{
    const double v = parse_double(key, line, value);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        fail(key, line, "expected an integer, got '" + value + "'");
    return static_cast<int>(v);
}

cd parse_complex_checked(const std::string& key, int line, const std::string& value)
{
    try {
        return parse_complex(value);
    } catch (...) {
        fail(key, line, "unparsable complex number '" + value + "'");
    }
}

GridSpec parse_grid(const std::string& key, int line, const std::string& value)
{
    std::vector<std::string> parts;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        parts.push_back(trim(item));
    if (parts.size() != 3)
        fail(key, line, "expected 'start, stop, count'");
    GridSpec g{parse_double(key, line, parts[0]), parse_double(key, line, parts[1]),
               parse_int(key, line, parts[2])};
    if (g.count < 2)
        fail(key, line, "grid count must be >= 2");
    if (!(g.start < g.stop))
        fail(key, line, "grid start must be < stop");
    return g;
}

std::vector<cd> parse_matrix_entries(const std::string& value)
{
    std::vector<cd> entries;
    std::stringstream rows(value);
    std::string row;
    while (std::getline(rows, row, ';')) {
        std::stringstream cols(row);
        std::string cell;
        while (std::getline(cols, cell, ','))
            entries.push_back(parse_complex(trim(cell)));
    }
    return entries;
}

} // namespace

ConfigError::ConfigError(const std::string& message, std::string key, int line)
    : std::runtime_error(message), key_(std::move(key)), line_(line)
{
}

cd parse_complex(const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw std::invalid_argument("empty complex literal");

    if (s.back() != 'i' && s.back() != 'j') {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing characters in complex literal");
        return cd(v, 0.0);
    }

    s.pop_back(); // drop the imaginary unit
    // split at the last +/- that is not a leading sign or an exponent sign
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto to_double = [](const std::string& part) {
        if (part.empty() || part == "+")
            return 1.0;
        if (part == "-")
            return -1.0;
        std::size_t pos = 0;
        const double v = std::stod(part, &pos);
        if (pos != part.size())
            throw std::invalid_argument("trailing characters in complex literal");
        return v;
    };
    if (split == std::string::npos)
        return cd(0.0, to_double(s)); // pure imaginary
    return cd(to_double(s.substr(0, split)), to_double(s.substr(split)));
}

void set_key(RunConfig& config, const std::string& key, const std::string& value, int line)
{
    ModelParams& p = config.params;
    if (key == "g0") {
        p.g0 = parse_complex_checked(key, line, value);
    } else if (key == "g1") {
        p.g1 = parse_complex_checked(key, line, value);
    } else if (key == "kappa") {
        p.kappa = parse_double(key, line, value);
        if (!(p.kappa > 0.0))
            fail(key, line, "kappa must be > 0");
    } else if (key == "omega10") {
        p.omega10 = parse_double(key, line, value);
        if (p.omega10 < 0.0)
            fail(key, line, "omega10 must be >= 0");
    } else if (key == "delta") {
        p.delta = parse_double(key, line, value);
    } else if (key == "nbar") {
        p.nbar = parse_double(key, line, value);
        if (p.nbar < 0.0)
            fail(key, line, "nbar must be >= 0");
    } else if (key == "interference") {
        p.interference = parse_double(key, line, value);
        if (p.interference < 0.0 || p.interference > 1.0)
            fail(key, line, "interference must lie in [0, 1]");
    } else if (key == "mode") {
        if (value == "steady")
            config.mode = RunMode::steady;
        else if (value == "sweep")
            config.mode = RunMode::sweep;
        else if (value == "spectrum")
            config.mode = RunMode::spectrum;
        else if (value == "trap")
            config.mode = RunMode::trap;
        else if (value == "validate")
            config.mode = RunMode::validate;
        else
            fail(key, line, "unknown mode '" + value + "'");
    } else if (key == "equation") {
        if (value == "reduced")
            config.equation = EquationChoice::reduced;
        else if (value == "approx")
            config.equation = EquationChoice::approx;
        else if (value == "full")
            config.equation = EquationChoice::full;
        else
            fail(key, line, "unknown equation '" + value + "'");
    } else if (key == "delta_grid") {
        config.delta_grid = parse_grid(key, line, value);
    } else if (key == "omega_grid") {
        config.omega_grid = parse_grid(key, line, value);
    } else if (key == "t_stop") {
        config.t_stop = parse_double(key, line, value);
        if (!(config.t_stop > 0.0))
            fail(key, line, "t_stop must be > 0");
    } else if (key == "t_count") {
        config.t_count = parse_int(key, line, value);
        if (config.t_count < 2)
            fail(key, line, "t_count must be >= 2");
    } else if (key == "initial_state") {
        config.initial_state = value;
    } else if (key == "n_max") {
        config.n_max = parse_int(key, line, value);
        if (config.n_max < 0)
            fail(key, line, "n_max must be >= 0 (0 = auto)");
    } else if (key == "mu0") {
        config.probe.mu0 = parse_double(key, line, value);
    } else if (key == "mu1") {
        config.probe.mu1 = parse_double(key, line, value);
    } else if (key == "kernel_tol") {
        config.kernel_tol = parse_double(key, line, value);
        if (!(config.kernel_tol > 0.0))
            fail(key, line, "kernel_tol must be > 0");
    } else if (key == "output_path") {
        config.output_path = value;
    } else {
        fail(key, line, "unknown key");
    }
}

DensityMatrix RunConfig::resolve_initial_state() const
{
    const std::string& label = initial_state;
    try {
        if (label == "ket0")
            return DensityMatrix::ket(3, 0);
        if (label == "ket1")
            return DensityMatrix::ket(3, 1);
        if (label == "ket2")
            return DensityMatrix::ket(3, 2);
        if (label == "S" || label == "A") {
            const SABasis basis = SABasis::from_params(params);
            const Eigen::Index row = label == "S" ? 0 : 1;
            return DensityMatrix::pure(basis.unitary.row(row).conjugate().transpose());
        }
        const std::vector<cd> entries = parse_matrix_entries(label);
        if (entries.size() != 9)
            throw std::invalid_argument("expected 9 entries");
        Matrix m(3, 3);
        for (Eigen::Index i = 0; i < 3; ++i)
            for (Eigen::Index j = 0; j < 3; ++j)
                m(i, j) = entries[i * 3 + j];
        const cd tr = m.trace();
        if (std::abs(tr) < 1e-12)
            throw std::invalid_argument("matrix has zero trace");
        return DensityMatrix::from_matrix(m / tr, 1e-9);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config error: invalid initial_state: ") + e.what(),
                          "initial_state", 0);
    }
}

void finalize(RunConfig& config)
{
    try {
        config.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config error: ") + e.what(), "params", 0);
    }
    if (config.equation == EquationChoice::full && config.mode != RunMode::steady)
        throw ConfigError("config error: equation=full is supported in steady mode only",
                          "equation", 0);
    config.resolve_initial_state();
}

RunConfig parse_config(const std::string& text)
{
    RunConfig config;
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty())
            continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config error: expected 'key = value' (line " +
                                  std::to_string(line) + ")",
                              stripped, line);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config error: empty key (line " + std::to_string(line) + ")",
                              key, line);
        set_key(config, key, value, line);
    }
    finalize(config);
    return config;
}

} // namespace lambdacav
