#include "polariton/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace polariton {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, std::string_view key, const std::string& what)
{
    throw ConfigError("line " + std::to_string(line) + ": key '" + std::string(key) + "': " + what);
}

double to_number(std::string_view value, int line, std::string_view key)
{
    double out = 0.0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (value.empty() || ec != std::errc{} || ptr != end || !std::isfinite(out)) {
        fail(line, key, "expected a finite number, got '" + std::string(value) + "'");
    }
    return out;
}

int to_integer(std::string_view value, int line, std::string_view key)
{
    int out = 0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (value.empty() || ec != std::errc{} || ptr != end) {
        fail(line, key, "expected an integer, got '" + std::string(value) + "'");
    }
    return out;
}

bool to_bool(std::string_view value, int line, std::string_view key)
{
    if (value == "true") {
        return true;
    }
    if (value == "false") {
        return false;
    }
    fail(line, key, "expected true or false, got '" + std::string(value) + "'");
}

std::vector<double> to_list(std::string_view value, int line, std::string_view key)
{
    std::vector<double> out;
    if (value.empty()) {
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto comma = value.find(',', start);
        out.push_back(to_number(trim(value.substr(start, comma - start)), line, key));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

using Setter = std::function<void(std::string_view value, int line, std::string_view key)>;

std::map<std::string, Setter, std::less<>> system_keys(SystemParams& s)
{
    const auto num = [](double& field) {
        return [&field](std::string_view v, int line, std::string_view key) { field = to_number(v, line, key); };
    };
    return {
        {"g1", num(s.g1)},
        {"g2", num(s.g2)},
        {"omega_c", num(s.omega_c)},
        {"delta", num(s.delta)},
        {"big_delta", num(s.big_delta)},
        {"gamma1", num(s.gamma1)},
        {"gamma2", num(s.gamma2)},
        {"gamma3", num(s.gamma3)},
        {"kappa", num(s.kappa)},
        {"ep", num(s.ep)},
        {"n_trunc", [&s](std::string_view v, int line, std::string_view key) { s.n_trunc = to_integer(v, line, key); }},
    };
}

std::map<std::string, Setter, std::less<>> run_keys(RunSettings& r)
{
    const auto num = [](double& field) {
        return [&field](std::string_view v, int line, std::string_view key) { field = to_number(v, line, key); };
    };
    const auto integer = [](int& field) {
        return [&field](std::string_view v, int line, std::string_view key) { field = to_integer(v, line, key); };
    };
    const auto flag = [](bool& field) {
        return [&field](std::string_view v, int line, std::string_view key) { field = to_bool(v, line, key); };
    };
    return {
        {"omega_min", num(r.omega_min)},
        {"omega_max", num(r.omega_max)},
        {"omega_points", integer(r.omega_points)},
        {"ep_values",
         [&r](std::string_view v, int line, std::string_view key) { r.ep_values = to_list(v, line, key); }},
        {"ep_min", num(r.ep_min)},
        {"ep_max", num(r.ep_max)},
        {"ep_points", integer(r.ep_points)},
        {"n_max", integer(r.n_max)},
        {"off_diagonal_gamma", flag(r.off_diagonal_gamma)},
        {"backend",
         [&r](std::string_view v, int line, std::string_view key) {
             try {
                 r.backend = spectrum_backend_from_string(v);
             } catch (const std::invalid_argument& e) {
                 fail(line, key, e.what());
             }
         }},
        {"sweep_n_trunc", integer(r.sweep_n_trunc)},
        {"convergence_check", flag(r.convergence_check)},
        {"shoulders", flag(r.shoulders)},
        {"peak_prominence", num(r.peak_prominence)},
        {"shoulder_prominence", num(r.shoulder_prominence)},
        {"dispersive_fit", flag(r.dispersive_fit)},
        {"assign_window", num(r.assign_window)},
        {"figure",
         [&r](std::string_view v, int line, std::string_view key) {
             if (v != "fig4" && v != "fig5" && v != "fig6" && v != "fig7") {
                 fail(line, key, "expected fig4, fig5, fig6 or fig7, got '" + std::string(v) + "'");
             }
             r.figure = std::string(v);
         }},
    };
}

std::map<std::string, Setter, std::less<>> output_keys(OutputSettings& o)
{
    return {
        {"dir",
         [&o](std::string_view v, int line, std::string_view key) {
             if (v.empty()) {
                 fail(line, key, "empty directory");
             }
             o.dir = std::string(v);
         }},
        {"format",
         [&o](std::string_view v, int line, std::string_view key) {
             if (v == "csv") {
                 o.format = OutputFormat::csv;
             } else if (v == "tsv") {
                 o.format = OutputFormat::tsv;
             } else {
                 fail(line, key, "expected csv or tsv, got '" + std::string(v) + "'");
             }
         }},
    };
}

void check_run(const RunSettings& r, const SystemParams& s, const std::map<std::string, int>& lines)
{
    const auto line_of = [&](const std::string& key) {
        const auto it = lines.find("run." + key);
        return it == lines.end() ? 0 : it->second;
    };
    if (!(r.omega_max > r.omega_min)) {
        fail(line_of("omega_max"), "omega_max", "must exceed omega_min");
    }
    if (r.omega_points < 2) {
        fail(line_of("omega_points"), "omega_points", "must be >= 2");
    }
    for (const double ep : r.ep_values) {
        if (ep < 0.0) {
            fail(line_of("ep_values"), "ep_values", "drive amplitudes must be >= 0");
        }
    }
    if (r.ep_min < 0.0) {
        fail(line_of("ep_min"), "ep_min", "must be >= 0");
    }
    if (r.ep_points < 1) {
        fail(line_of("ep_points"), "ep_points", "must be >= 1");
    }
    if (r.ep_points > 1 && !(r.ep_max > r.ep_min)) {
        fail(line_of("ep_max"), "ep_max", "must exceed ep_min when ep_points > 1");
    }
    if (r.n_max < 1 || r.n_max > s.n_trunc - 1) {
        fail(line_of("n_max"), "n_max", "must lie in [1, n_trunc - 1]");
    }
    if (r.sweep_n_trunc < 3) {
        fail(line_of("sweep_n_trunc"), "sweep_n_trunc", "must be >= 3");
    }
    if (r.peak_prominence < 0.0) {
        fail(line_of("peak_prominence"), "peak_prominence", "must be >= 0");
    }
    if (r.shoulder_prominence < 0.0) {
        fail(line_of("shoulder_prominence"), "shoulder_prominence", "must be >= 0");
    }
    if (!(r.assign_window > 0.0)) {
        fail(line_of("assign_window"), "assign_window", "must be > 0");
    }
}

} // namespace

RunConfig parse_config(std::string_view text)
{
    RunConfig cfg;
    auto sys = system_keys(cfg.system);
    auto run = run_keys(cfg.run);
    auto out = output_keys(cfg.output);
    std::map<std::string, int> seen; // "section.key" -> line
    std::string section;
    std::map<std::string, Setter, std::less<>>* table = nullptr;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section == "system") {
                table = &sys;
            } else if (section == "run") {
                table = &run;
            } else if (section == "output") {
                table = &out;
            } else {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        std::string_view value = line.substr(eq + 1);
        if (const auto hash = value.find('#'); hash != std::string_view::npos) {
            value = value.substr(0, hash);
        }
        value = trim(value);
        if (table == nullptr) {
            fail(line_no, key, "appears before any section header");
        }
        const auto it = table->find(key);
        if (it == table->end()) {
            fail(line_no, key, "unknown key in [" + section + "]");
        }
        const std::string full = section + "." + std::string(key);
        if (const auto prev = seen.find(full); prev != seen.end()) {
            fail(line_no, key, "repeated (first set on line " + std::to_string(prev->second) + ")");
        }
        seen[full] = line_no;
        it->second(value, line_no, key);
    }

    for (const char* key : {"g1", "g2", "omega_c", "kappa", "n_trunc"}) {
        if (!seen.count(std::string("system.") + key)) {
            throw ConfigError(std::string("missing required key '") + key + "' in [system]");
        }
    }
    try {
        cfg.system.validate();
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        for (const auto& [key, setter] : sys) {
            if (what.find(": " + key + " ") != std::string::npos) {
                fail(seen["system." + key], key, what);
            }
        }
        throw ConfigError(what);
    }
    check_run(cfg.run, cfg.system, seen);
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string serialize_config(const RunConfig& c)
{
    std::ostringstream o;
    const SystemParams& s = c.system;
    o << "[system]\n"
      << "g1 = " << fmt(s.g1) << "\n"
      << "g2 = " << fmt(s.g2) << "\n"
      << "omega_c = " << fmt(s.omega_c) << "\n"
      << "delta = " << fmt(s.delta) << "\n"
      << "big_delta = " << fmt(s.big_delta) << "\n"
      << "gamma1 = " << fmt(s.gamma1) << "\n"
      << "gamma2 = " << fmt(s.gamma2) << "\n"
      << "gamma3 = " << fmt(s.gamma3) << "\n"
      << "kappa = " << fmt(s.kappa) << "\n"
      << "ep = " << fmt(s.ep) << "\n"
      << "n_trunc = " << s.n_trunc << "\n";

    const RunSettings& r = c.run;
    std::string eps;
    for (std::size_t k = 0; k < r.ep_values.size(); ++k) {
        eps += (k ? ", " : "") + fmt(r.ep_values[k]);
    }
    const auto flag = [](bool b) { return b ? "true" : "false"; };
    o << "\n[run]\n"
      << "omega_min = " << fmt(r.omega_min) << "\n"
      << "omega_max = " << fmt(r.omega_max) << "\n"
      << "omega_points = " << r.omega_points << "\n"
      << "ep_values = " << eps << "\n"
      << "ep_min = " << fmt(r.ep_min) << "\n"
      << "ep_max = " << fmt(r.ep_max) << "\n"
      << "ep_points = " << r.ep_points << "\n"
      << "n_max = " << r.n_max << "\n"
      << "off_diagonal_gamma = " << flag(r.off_diagonal_gamma) << "\n"
      << "backend = " << to_string(r.backend) << "\n"
      << "sweep_n_trunc = " << r.sweep_n_trunc << "\n"
      << "convergence_check = " << flag(r.convergence_check) << "\n"
      << "shoulders = " << flag(r.shoulders) << "\n"
      << "peak_prominence = " << fmt(r.peak_prominence) << "\n"
      << "shoulder_prominence = " << fmt(r.shoulder_prominence) << "\n"
      << "dispersive_fit = " << flag(r.dispersive_fit) << "\n"
      << "assign_window = " << fmt(r.assign_window) << "\n";
    if (!r.figure.empty()) {
        o << "figure = " << r.figure << "\n";
    }
    o << "\n[output]\n"
      << "dir = " << c.output.dir << "\n"
      << "format = " << (c.output.format == OutputFormat::csv ? "csv" : "tsv") << "\n";
    return o.str();
}

std::vector<double> ep_sweep_grid(const RunSettings& run)
{
    if (run.ep_points == 1) {
        return {run.ep_min};
    }
    return linear_grid(run.ep_min, run.ep_max, run.ep_points);
}

} // namespace polariton
