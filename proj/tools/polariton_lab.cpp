// polariton-lab <subcommand> --config <path> [--out <dir>]
//
// `figures` also accepts preset names (fig4 fig5 fig6 fig7) in place of
// --config; with neither it runs all four.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polariton/config.hpp"
#include "polariton/runner.hpp"

namespace {

int run_one(const std::string& sub, const polariton::RunConfig& cfg, const std::string& out)
{
    const std::string dir = out.empty() ? cfg.output.dir : out;
    const polariton::RunReport report = polariton::run_subcommand(sub, cfg, dir, std::cout);
    for (const auto& f : report.files) {
        std::cout << "wrote " << f.string() << "\n";
    }
    return report.exit_status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Four-level cavity polariton toolkit", "polariton-lab"};
    app.set_version_flag("--version", polariton::kVersion);
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> figures;

    const std::vector<std::pair<std::string, std::string>> subs{
        {"manifolds", "dressed-state energies and coefficients"},
        {"couplings", "effective Rabi frequencies and damping matrices"},
        {"stark", "Stark-doublet sweep over ep"},
        {"spectrum", "cavity fluorescence spectrum with peak table"},
        {"validate", "cross-checks; exits 1 when any exceeds its tolerance"},
        {"figures", "datasets of the bundled figure presets"},
    };
    for (const auto& [name, help] : subs) {
        CLI::App* sc = app.add_subcommand(name, help);
        auto* opt = sc->add_option("--config", config_path, "config file")->check(CLI::ExistingFile);
        sc->add_option("--out", out_dir, "output directory (overrides [output] dir)");
        if (name == "figures") {
            sc->add_option("names", figures, "preset names");
        } else {
            opt->required();
        }
    }

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        if (sub == "figures" && config_path.empty()) {
            if (figures.empty()) {
                figures = {"fig4", "fig5", "fig6", "fig7"};
            }
            int status = 0;
            for (const std::string& fig : figures) {
                const auto path = polariton::preset_path(fig);
                std::cout << "preset " << path.string() << "\n";
                status = std::max(status, run_one(sub, polariton::load_config(path.string()), out_dir));
            }
            return status;
        }
        if (!figures.empty()) {
            std::cerr << "error: give either --config or preset names, not both\n";
            return 2;
        }
        return run_one(sub, polariton::load_config(config_path), out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
