#include <doctest.h>

#include <fstream>
#include <sstream>

#include "polariton/config.hpp"
#include "polariton/runner.hpp"

using namespace polariton;

namespace {

const char* kMinimal = R"(
[system]
g1 = 6
g2 = 6   # trailing comment
omega_c = 2
kappa = 0.25
n_trunc = 10
)";

std::string read(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("minimal config and defaults")
{
    const RunConfig c = parse_config(kMinimal);
    CHECK(c.system.g2 == 6.0);
    CHECK(c.system.kappa == 0.25);
    CHECK(c.system.n_trunc == 10);
    CHECK(c.run.omega_points == 4001);
    CHECK(c.run.backend == SpectrumBackend::schur);
    CHECK(c.output.format == OutputFormat::csv);
}

TEST_CASE("errors name the key and the line")
{
    const auto fails = [](const std::string& text, const std::string& needle) {
        CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains(needle.c_str()), ConfigError);
    };
    fails(std::string(kMinimal) + "gamma4 = 1\n", "'gamma4'");
    fails(std::string(kMinimal) + "kappa = 1\n", "line 8");
    fails(std::string(kMinimal) + "[run]\nomega_points = many\n", "'omega_points'");
    fails(std::string(kMinimal) + "[run]\nbackend = fft\n", "'backend'");
    fails(std::string(kMinimal) + "[run]\nn_max = 10\n", "'n_max'");
    fails(std::string(kMinimal) + "[gui]\n", "gui");
    fails("g1 = 1\n", "line 1");
    fails("[system]\ng1 = 6\ng2 = 6\nomega_c = 2\nn_trunc = 10\n", "kappa");
    fails(std::string(kMinimal) + "ep = -1\n", "line 8");
}

TEST_CASE("bundled presets round-trip")
{
    for (const std::string fig : {"fig4", "fig5", "fig6", "fig7", "degenerate"}) {
        const RunConfig c = load_config(preset_path(fig).string());
        const RunConfig again = parse_config(serialize_config(c));
        CHECK(again == c);
        CHECK(serialize_config(again) == serialize_config(c));
    }
    const RunConfig fig6 = load_config(preset_path("fig6").string());
    CHECK(fig6.run.ep_values == std::vector<double>{0.02, 0.06, 0.45});
    CHECK(fig6.system.kappa == 0.25);
    CHECK_THROWS_AS(preset_path("fig9"), std::invalid_argument);
    CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), ConfigError);
}

TEST_CASE("sweep grid")
{
    RunSettings r;
    r.ep_min = 0.1;
    r.ep_max = 0.5;
    r.ep_points = 5;
    const auto g = ep_sweep_grid(r);
    REQUIRE(g.size() == 5);
    CHECK(g[2] == doctest::Approx(0.3));
    r.ep_points = 1;
    CHECK(ep_sweep_grid(r) == std::vector<double>{0.1});
}

TEST_CASE("runner writes deterministic tables")
{
    const auto dir = std::filesystem::temp_directory_path() / "polariton_runner_test";
    std::filesystem::remove_all(dir);
    RunConfig c = parse_config(kMinimal);
    std::ostringstream log;
    const RunReport a = run_subcommand("manifolds", c, dir / "a", log);
    const RunReport b = run_subcommand("manifolds", c, dir / "b", log);
    REQUIRE(a.files.size() == 1);
    const std::string text = read(a.files[0]);
    CHECK(text == read(b.files[0]));
    CHECK(text.rfind("# polariton-lab ", 0) == 0);
    CHECK(text.find("n,label,epsilon,alpha_re,alpha_im") != std::string::npos);

    c.output.format = OutputFormat::tsv;
    const RunReport t = run_subcommand("couplings", c, dir / "t", log);
    REQUIRE(t.files.size() == 2);
    CHECK(t.files[0].extension() == ".tsv");
    CHECK(read(t.files[1]).find("cos_theta_re") != std::string::npos);

    CHECK_THROWS_AS(run_subcommand("plot", c, dir, log), std::invalid_argument);
    CHECK_THROWS_AS(run_subcommand("manifolds", c, "/proc/polariton/out", log), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("degenerate preset goes through the numeric path")
{
    const auto dir = std::filesystem::temp_directory_path() / "polariton_degenerate_test";
    std::ostringstream log;
    const RunReport r = run_subcommand("manifolds", load_config(preset_path("degenerate").string()), dir, log);
    const std::string text = read(r.files[0]);
    CHECK(text.find(",numeric\n") != std::string::npos);
    CHECK(text.find("\n2,1,") != std::string::npos);
    std::istringstream lines(text);
    for (std::string l; std::getline(lines, l);) {
        if (l.rfind("2,", 0) == 0 || l.rfind("3,", 0) == 0) {
            CHECK(l.substr(l.rfind(',') + 1) == "numeric");
        }
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("validate exit status")
{
    std::ostringstream log;
    const auto dir = std::filesystem::temp_directory_path() / "polariton_validate_test";
    const RunReport ok = run_subcommand("validate", load_config(preset_path("fig4").string()), dir, log);
    CHECK(ok.exit_status == 0);
    CHECK(log.str().find("FAIL") == std::string::npos);

    for (const CheckResult& c : validation_checks(load_config(preset_path("fig4").string()))) {
        CAPTURE(c.name);
        CHECK(c.passed);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("stark and small spectrum runs")
{
    const auto dir = std::filesystem::temp_directory_path() / "polariton_spectrum_test";
    RunConfig c = load_config(preset_path("fig6").string());
    c.system.n_trunc = 5;
    c.run.omega_points = 101;
    std::ostringstream log;
    const RunReport r = run_subcommand("spectrum", c, dir, log);
    REQUIRE(r.files.size() == 2);
    const std::string side = read(r.files[1]);
    CHECK(side.find("\"coherent_weight\"") != std::string::npos);
    CHECK(side.find("\"assignment\"") != std::string::npos);
    CHECK(read(r.files[0]).find("omega,S_incoherent_ep0.02,S_incoherent_ep0.06,S_incoherent_ep0.45") !=
          std::string::npos);

    c = load_config(preset_path("fig5").string());
    c.run.ep_points = 4;
    c.run.convergence_check = false;
    const RunReport s = run_subcommand("stark", c, dir, log);
    CHECK(read(s.files[0]).find("ep,eps_tilde_plus") != std::string::npos);
    std::filesystem::remove_all(dir);
}
