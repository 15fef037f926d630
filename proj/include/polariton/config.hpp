// config.hpp: run configuration files.
//
// Flat "key = value" lines under [system], [run] and [output] headers.
// Blank lines and lines starting with '#' or ';' are ignored, as is
// anything after a '#' on a value line. Unknown keys, repeated keys, keys
// outside a section and malformed values are errors; every message names
// the key and its line.
//
// [system] keys (required: g1, g2, omega_c, kappa, n_trunc)
//   g1 g2 omega_c delta big_delta gamma1 gamma2 gamma3 kappa ep   numbers
//   n_trunc                                                       integer >= 3
// [run] keys, all optional (default)
//   omega_min (-8) omega_max (8) omega_points (4001)   spectrum grid
//   ep_values ()          comma list; spectrum curves, empty = system ep
//   ep_min (0) ep_max (0.5) ep_points (51)             Stark sweep grid
//   n_max (3)             highest manifold for manifolds/couplings
//   off_diagonal_gamma (true)
//   backend (schur)       schur | sparse_lu | eigendecomposition
//   sweep_n_trunc (15)    truncation of the Stark sweep oracle
//   convergence_check (true)
//   shoulders (true)      report curvature shoulders as peaks
//   peak_prominence (1e-6) shoulder_prominence (1e-7) assign_window (0.1)
//   dispersive_fit (true) allow an asymmetric (dispersive) part in peak fits
//   figure ()             fig4 | fig5 | fig6 | fig7, for `figures`
// [output] keys
//   dir (out)  format (csv)   csv | tsv

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polariton/lindblad.hpp"
#include "polariton/model.hpp"

namespace polariton {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, tsv };

struct RunSettings {
    double omega_min{-8.0};
    double omega_max{8.0};
    int omega_points{4001};
    std::vector<double> ep_values;
    double ep_min{0.0};
    double ep_max{0.5};
    int ep_points{51};
    int n_max{3};
    bool off_diagonal_gamma{true};
    SpectrumBackend backend{SpectrumBackend::schur};
    int sweep_n_trunc{15};
    bool convergence_check{true};
    bool shoulders{true};
    double peak_prominence{1e-6};
    double shoulder_prominence{1e-7};
    bool dispersive_fit{true};
    double assign_window{0.1};
    std::string figure;

    bool operator==(const RunSettings&) const = default;
};

struct OutputSettings {
    std::string dir{"out"};
    OutputFormat format{OutputFormat::csv};

    bool operator==(const OutputSettings&) const = default;
};

struct RunConfig {
    SystemParams system;
    RunSettings run;
    OutputSettings output;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Every key, in a fixed order, with round-trip precision.
std::string serialize_config(const RunConfig& config);

// The Stark sweep grid described by ep_min/ep_max/ep_points.
std::vector<double> ep_sweep_grid(const RunSettings& run);

} // namespace polariton
