// runner.hpp: the polariton-lab subcommands.
//
// Every CSV starts with a "# polariton-lab <version>" line and one header
// line; the JSON sidecars carry the same version string. Numbers are
// printed with fixed formats, so equal configs give byte-identical files.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "polariton/config.hpp"

namespace polariton {

inline constexpr const char* kVersion = "0.1.0";

struct RunReport {
    int exit_status{0};
    std::vector<std::filesystem::path> files;
};

// name: manifolds | couplings | stark | spectrum | validate | figures.
// Writes into out_dir (created if missing); progress and the validate
// table go to `log`. Throws std::invalid_argument for an unknown name and
// std::runtime_error when the directory cannot be written.
RunReport run_subcommand(const std::string& name, const RunConfig& config,
                         const std::filesystem::path& out_dir, std::ostream& log);

struct CheckResult {
    std::string name;
    double value{0.0};
    double tolerance{0.0};
    bool passed{false};
};

// The cross-checks run by `validate` for config.system: closed-form vs
// numeric dressed states, coefficient vs bracket tables, basis-change
// exactness, commutator identities and Hermiticity. A ConsistencyError in
// a table becomes a failed row rather than an exception.
std::vector<CheckResult> validation_checks(const RunConfig& config);

// The checked-in config of a figure: POLARITON_PRESET_DIR, then the
// source-tree presets/ directory, then ./presets.
std::filesystem::path preset_path(const std::string& figure);

} // namespace polariton
