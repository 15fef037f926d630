#include "polariton/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "polariton/dressed.hpp"
#include "polariton/lindblad.hpp"
#include "polariton/peaks.hpp"
#include "polariton/polariton_map.hpp"
#include "polariton/reduced.hpp"

#ifndef POLARITON_SOURCE_PRESETS
#define POLARITON_SOURCE_PRESETS "presets"
#endif

namespace polariton {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string num(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

class Table {
public:
    Table(const fs::path& path, OutputFormat format, const std::vector<std::string>& columns)
        : out_(path), sep_(format == OutputFormat::csv ? ',' : '\t')
    {
        if (!out_) {
            throw std::runtime_error("cannot write '" + path.string() + "'");
        }
        out_ << "# polariton-lab " << kVersion << "\n";
        row(columns);
    }

    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            out_ << (k ? std::string(1, sep_) : "") << cells[k];
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
    char sep_;
};

std::string extension(OutputFormat f)
{
    return f == OutputFormat::csv ? ".csv" : ".tsv";
}

void write_json(const fs::path& path, const json& doc)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << doc.dump(2) << "\n";
}

json params_json(const SystemParams& s)
{
    return {{"g1", s.g1},         {"g2", s.g2},         {"omega_c", s.omega_c}, {"delta", s.delta},
            {"big_delta", s.big_delta}, {"gamma1", s.gamma1}, {"gamma2", s.gamma2}, {"gamma3", s.gamma3},
            {"kappa", s.kappa},   {"ep", s.ep},         {"n_trunc", s.n_trunc}};
}

double max_abs(const Eigen::MatrixXcd& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void run_manifolds(const RunConfig& cfg, const fs::path& dir, std::ostream& log, RunReport& report)
{
    const fs::path path = dir / ("manifolds" + extension(cfg.output.format));
    Table t(path, cfg.output.format,
            {"n", "label", "epsilon", "alpha_re", "alpha_im", "beta_re", "beta_im", "mu_re", "mu_im", "nu_re",
             "nu_im", "path"});
    int numeric = 0;
    for (int n = 0; n <= cfg.run.n_max; ++n) {
        const ManifoldSpectrum m = dressed_manifold(cfg.system, n);
        numeric += m.path == SpectrumPath::numeric;
        for (const DressedState& s : m.states) {
            std::vector<std::string> cells{std::to_string(n), std::to_string(s.label), num(s.epsilon)};
            for (Eigen::Index k = 0; k < 4; ++k) {
                cells.push_back(num(s.coeffs[k].real()));
                cells.push_back(num(s.coeffs[k].imag()));
            }
            cells.emplace_back(to_string(m.path));
            t.row(cells);
        }
    }
    log << "manifolds: " << cfg.run.n_max + 1 << " manifolds, " << numeric << " on the numeric path\n";
    report.files.push_back(path);
}

void run_couplings(const RunConfig& cfg, const fs::path& dir, std::ostream& log, RunReport& report)
{
    const fs::path rabi_path = dir / ("rabi" + extension(cfg.output.format));
    const fs::path damp_path = dir / ("damping" + extension(cfg.output.format));
    Table rabi(rabi_path, cfg.output.format, {"n", "lower_label", "upper_label", "omega_re", "omega_im"});
    Table damp(damp_path, cfg.output.format,
               {"n", "j_label", "k_label", "gamma_re", "gamma_im", "cos_theta_re", "cos_theta_im"});
    double rabi_dev = 0.0;
    double damp_dev = 0.0;
    for (int n = 1; n <= cfg.run.n_max; ++n) {
        const ManifoldSpectrum lower = dressed_manifold(cfg.system, n - 1);
        const ManifoldSpectrum upper = dressed_manifold(cfg.system, n);
        const CouplingTable table = rabi_table(cfg.system, n);
        rabi_dev = std::max(rabi_dev, table.max_bracket_deviation);
        for (Eigen::Index i = 0; i < table.omega.rows(); ++i) {
            for (Eigen::Index j = 0; j < table.omega.cols(); ++j) {
                rabi.row({std::to_string(n), std::to_string(lower.states[static_cast<std::size_t>(i)].label),
                          std::to_string(upper.states[static_cast<std::size_t>(j)].label),
                          num(table.omega(i, j).real()), num(table.omega(i, j).imag())});
            }
        }
        const DampingMatrix d = damping_matrix(cfg.system, n);
        damp_dev = std::max(damp_dev, d.max_bracket_deviation);
        for (Eigen::Index j = 0; j < d.gamma.rows(); ++j) {
            for (Eigen::Index k = 0; k < d.gamma.cols(); ++k) {
                if (j != k && !cfg.run.off_diagonal_gamma) {
                    continue;
                }
                const cplx c = cos_theta(d, static_cast<int>(j), static_cast<int>(k));
                damp.row({std::to_string(n), std::to_string(upper.states[static_cast<std::size_t>(j)].label),
                          std::to_string(upper.states[static_cast<std::size_t>(k)].label),
                          num(d.gamma(j, k).real()), num(d.gamma(j, k).imag()), num(c.real()), num(c.imag())});
            }
        }
    }
    log << "couplings: max bracket deviation rabi " << num(rabi_dev) << ", damping " << num(damp_dev) << "\n";
    report.files.push_back(rabi_path);
    report.files.push_back(damp_path);
}

void write_stark(const RunConfig& cfg, const fs::path& path, std::ostream& log, RunReport& report)
{
    SweepOptions opts;
    opts.n_trunc = cfg.run.sweep_n_trunc;
    opts.convergence_check = cfg.run.convergence_check;
    const SweepTrace trace = stark_sweep(cfg.system, ep_sweep_grid(cfg.run), opts);
    Table t(path, cfg.output.format,
            {"ep", "eps_tilde_plus", "eps_tilde_minus", "gamma_tilde_plus", "gamma_tilde_minus", "regime",
             "branch1_re", "branch1_im", "branch2_re", "branch2_im", "min_overlap", "ambiguous"});
    int ambiguous = 0;
    for (const SweepSample& s : trace.samples) {
        ambiguous += s.ambiguous;
        t.row({num(s.ep), num(s.analytic.epsilon_plus), num(s.analytic.epsilon_minus), num(s.analytic.gamma_plus),
               num(s.analytic.gamma_minus), std::string(to_string(s.analytic.regime)), num(s.numeric[0].real()),
               num(s.numeric[0].imag()), num(s.numeric[1].real()), num(s.numeric[1].imag()), num(s.min_overlap),
               s.ambiguous ? "1" : "0"});
    }
    log << path.filename().string() << ": " << trace.samples.size() << " samples, " << ambiguous
        << " ambiguous, threshold ep " << num(stark_eigenvalues(cfg.system).threshold_ep);
    if (cfg.run.convergence_check) {
        log << ", drift at n_trunc " << 2 * trace.n_trunc << " " << num(trace.convergence_drift)
            << (trace.converged ? " (converged)" : " (NOT converged)");
    }
    log << "\n";
    report.files.push_back(path);
}

json peak_json(const Peak& p)
{
    return {{"center", p.center},
            {"height", p.height},
            {"fwhm", p.fwhm},
            {"hwhm", p.hwhm()},
            {"baseline", p.baseline},
            {"dispersion", p.dispersion},
            {"residual", p.residual},
            {"fitted", p.fitted},
            {"shoulder", p.shoulder},
            {"assignment", p.assignment},
            {"assignment_residual", p.assignment_residual}};
}

void write_spectrum(const RunConfig& cfg, const std::string& stem, const fs::path& dir, std::ostream& log,
                    RunReport& report)
{
    std::vector<double> eps = cfg.run.ep_values;
    if (eps.empty()) {
        eps.push_back(cfg.system.ep);
    }
    const std::vector<double> grid = linear_grid(cfg.run.omega_min, cfg.run.omega_max, cfg.run.omega_points);
    const BareBasis basis(cfg.system.n_trunc);
    SpectrumOptions sopts;
    sopts.backend = cfg.run.backend;
    PeakOptions popts;
    popts.min_prominence = cfg.run.peak_prominence;
    popts.shoulders = cfg.run.shoulders;
    popts.shoulder_prominence = cfg.run.shoulder_prominence;
    popts.dispersive = cfg.run.dispersive_fit;

    std::vector<SpectrumTrace> traces;
    json curves = json::array();
    for (const double ep : eps) {
        SystemParams p = cfg.system;
        p.ep = ep;
        traces.push_back(fluorescence_spectrum(p, basis, grid, sopts));
        const SpectrumTrace& tr = traces.back();
        std::vector<Peak> peaks = find_peaks(tr.omega, tr.incoherent, popts);
        if (p.omega_c > 0.0) {
            peaks = identify_transitions(p, std::move(peaks), cfg.run.assign_window);
        }
        json jp = json::array();
        for (const Peak& pk : peaks) {
            jp.push_back(peak_json(pk));
        }
        json curve = {{"ep", ep},
                      {"coherent_weight", tr.coherent_weight},
                      {"mean_field", {tr.mean_field.real(), tr.mean_field.imag()}},
                      {"photon_number", tr.photon_number},
                      {"fluctuation_number", tr.fluctuation_number},
                      {"tail_population", tr.tail_population},
                      {"steady_residual", tr.steady_residual},
                      {"flagged_samples", tr.flagged},
                      {"peaks", jp}};
        if (p.omega_c > 0.0) {
            const MollowPrediction m = mollow_predictions(p);
            curve["mollow_prediction"] = {{"has_sidebands", m.has_sidebands},
                                          {"center_linewidth", m.center_linewidth},
                                          {"sideband_linewidth", m.sideband_linewidth},
                                          {"sideband_offset", m.sideband_offset}};
        }
        curves.push_back(curve);
        log << stem << ": ep " << num(ep) << ", " << peaks.size() << " peaks, coherent weight "
            << num(tr.coherent_weight) << ", tail population " << num(tr.tail_population) << ", "
            << tr.flagged.size() << " flagged samples\n";
    }

    const fs::path csv = dir / (stem + extension(cfg.output.format));
    std::vector<std::string> columns{"omega"};
    for (const double ep : eps) {
        columns.push_back(eps.size() == 1 ? "S_incoherent" : "S_incoherent_ep" + num(ep));
    }
    Table t(csv, cfg.output.format, columns);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::vector<std::string> cells{num(grid[k])};
        for (const SpectrumTrace& tr : traces) {
            cells.push_back(num(tr.incoherent[k]));
        }
        t.row(cells);
    }
    const fs::path side = dir / (stem + ".json");
    write_json(side, {{"version", kVersion},
                      {"system", params_json(cfg.system)},
                      {"backend", std::string(to_string(cfg.run.backend))},
                      {"note", "S_incoherent excludes the coherent delta at omega = 0 of weight coherent_weight"},
                      {"curves", curves}});
    report.files.push_back(csv);
    report.files.push_back(side);
}

void run_validate(const RunConfig& cfg, const fs::path& dir, std::ostream& log, RunReport& report)
{
    const std::vector<CheckResult> checks = validation_checks(cfg);
    const fs::path path = dir / ("validate" + extension(cfg.output.format));
    Table t(path, cfg.output.format, {"check", "value", "tolerance", "status"});
    int failed = 0;
    for (const CheckResult& c : checks) {
        failed += !c.passed;
        t.row({c.name, num(c.value), num(c.tolerance), c.passed ? "PASS" : "FAIL"});
        char line[160];
        std::snprintf(line, sizeof line, "%-34s %12.3e  <= %9.1e  %s\n", c.name.c_str(), c.value, c.tolerance,
                      c.passed ? "PASS" : "FAIL");
        log << line;
    }
    log << "validate: " << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " passed\n";
    report.exit_status = failed ? 1 : 0;
    report.files.push_back(path);
}

void run_figure(const RunConfig& cfg, const fs::path& dir, std::ostream& log, RunReport& report)
{
    const std::string& fig = cfg.run.figure;
    if (fig == "fig4" || fig == "fig5") {
        write_stark(cfg, dir / (fig + extension(cfg.output.format)), log, report);
    } else if (fig == "fig6" || fig == "fig7") {
        write_spectrum(cfg, fig, dir, log, report);
    } else {
        throw std::invalid_argument("figures: config has no [run] figure key");
    }
}

void add(std::vector<CheckResult>& out, std::string name, double value, double tol)
{
    out.push_back({std::move(name), value, tol, std::isfinite(value) && value <= tol});
}

} // namespace

std::vector<CheckResult> validation_checks(const RunConfig& config)
{
    const SystemParams& p = config.system;
    const BareBasis basis(p.n_trunc);
    const int top = basis.top_complete_manifold();
    std::vector<CheckResult> out;

    add(out, "model.hermiticity_H0", hermiticity_error(build_H0(p, basis)), 1e-12);
    add(out, "model.hermiticity_Hd", hermiticity_error(build_Hd(p, basis)), 1e-12);
    {
        const OperatorMatrix heff = build_Heff(p, basis);
        OperatorMatrix sum = OperatorMatrix::Zero(basis.dim(), basis.dim());
        for (const OperatorMatrix& c : build_collapse_ops(p, basis)) {
            sum += c.adjoint() * c;
        }
        add(out, "model.heff_antihermitian_part", max_abs(heff - heff.adjoint() + 2.0 * I * sum), 1e-12);
    }

    double energy = 0.0, overlap = 0.0, sum_rule = 0.0, norm = 0.0, unitarity = 0.0;
    for (int n = 1; n <= top; ++n) {
        const ManifoldSpectrum m = dressed_manifold(p, n);
        const ManifoldSpectrum ref = numeric_manifold(p, n);
        const int size = manifold_size(n);
        double total = 0.0;
        for (std::size_t k = 0; k < m.states.size(); ++k) {
            const Eigen::VectorXcd a = m.states[k].coeffs.head(size);
            const Eigen::VectorXcd b = ref.states[k].coeffs.head(size);
            energy = std::max(energy, std::abs(m.states[k].epsilon - ref.states[k].epsilon));
            overlap = std::max(overlap, 1.0 - std::abs(a.dot(b)));
            norm = std::max(norm, std::abs(a.squaredNorm() - 1.0));
            total += m.states[k].epsilon;
        }
        sum_rule = std::max(sum_rule, std::abs(total - m.sum_rule));
        const Eigen::MatrixXcd mm = transformation_matrix(p, n).matrix;
        unitarity = std::max(unitarity, max_abs(mm.adjoint() * mm - Eigen::MatrixXcd::Identity(size, size)));
    }
    add(out, "dressed.energy_vs_numeric", energy, 1e-8);
    add(out, "dressed.overlap_defect", overlap, 1e-8);
    add(out, "dressed.sum_rule", sum_rule, 1e-9);
    add(out, "dressed.normalization", norm, 1e-12);
    add(out, "map.unitarity", unitarity, 1e-10);

    {
        OperatorMatrix sum = OperatorMatrix::Zero(basis.dim(), basis.dim());
        for (int n = 1; n <= p.n_trunc + 1; ++n) {
            sum += annihilation_component(basis, n);
        }
        add(out, "map.annihilation_sum", max_abs(sum - build_annihilation(basis)), 0.0);
    }

    const double inf = std::numeric_limits<double>::infinity();
    double rabi_dev = 0.0, damp_dev = 0.0, rabi_cf = 0.0, damp_cf = 0.0, psd = 0.0, cosb = 0.0;
    for (int n = 1; n <= top; ++n) {
        try {
            const CouplingTable t = rabi_table(p, n);
            rabi_dev = std::max(rabi_dev, t.max_bracket_deviation);
            rabi_cf = std::max(rabi_cf, t.max_closed_form_deviation);
        } catch (const ConsistencyError&) {
            rabi_dev = inf;
        }
        try {
            const DampingMatrix d = damping_matrix(p, n);
            damp_dev = std::max(damp_dev, d.max_bracket_deviation);
            damp_cf = std::max(damp_cf, d.max_closed_form_deviation);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(d.gamma);
            psd = std::max(psd, -eig.eigenvalues().minCoeff());
            for (Eigen::Index j = 0; j < d.gamma.rows(); ++j) {
                for (Eigen::Index k = 0; k < d.gamma.cols(); ++k) {
                    const double bound = std::sqrt(std::max(d.gamma(j, j).real() * d.gamma(k, k).real(), 0.0));
                    cosb = std::max(cosb, std::abs(d.gamma(j, k)) - bound);
                }
            }
        } catch (const ConsistencyError&) {
            damp_dev = inf;
        }
    }
    add(out, "map.rabi_bracket", rabi_dev, 1e-10);
    add(out, "map.damping_bracket", damp_dev, 1e-10);
    add(out, "map.damping_psd", std::max(psd, 0.0), 1e-12);
    add(out, "map.damping_cauchy_schwarz", std::max(cosb, 0.0), 1e-12);

    {
        const PolaritonGenerator gen = assemble_polariton_generator(p, basis, top);
        const OperatorMatrix proj = manifold_projector(basis, top);
        add(out, "map.generator_reconstruction", max_abs(gen.total() - proj * build_Heff(p, basis) * proj), 1e-10);
    }

    if (p.omega_c > 0.0) {
        add(out, "map.rabi_first_closed_form", rabi_cf, 1e-12);
        add(out, "map.damping_first_closed_form", damp_cf, 1e-12);
        const CommutatorReport comm = commutator_check(p, basis);
        add(out, "map.commutator_resonant", comm.resonant_deviation, 1e-10);
        add(out, "map.commutator_off_resonant", comm.off_resonant_deviation, 1e-10);
        add(out, "map.commutator_ground_expectation", std::abs(comm.ground_expectation - 1.0), 1e-12);

        const PolaritonGenerator gen = assemble_polariton_generator(p, basis, 1);
        const ManifoldSpectrum first = first_manifold(p);
        Eigen::MatrixXcd frame(basis.dim(), 2);
        frame.col(0).setZero();
        frame(basis.index(0, 1), 0) = 1.0;
        frame.col(1) = embed(basis, first.states[first.position_of(0)]);
        const Eigen::Matrix2cd sector = frame.adjoint() * gen.total() * frame;
        add(out, "reduced.sector_equality", max_abs(sector - reduced_hamiltonian(p)), 1e-12);
        const StarkResult stark = stark_eigenvalues(p);
        SystemParams at = p;
        at.ep = stark.threshold_ep;
        const StarkResult crit = stark_eigenvalues(at);
        add(out, "reduced.threshold_identity", std::abs(crit.omega0 - crit.gamma0 / 2.0), 1e-12);
    }
    return out;
}

fs::path preset_path(const std::string& figure)
{
    const std::string file = figure + ".cfg";
    if (const char* env = std::getenv("POLARITON_PRESET_DIR")) {
        if (fs::exists(fs::path(env) / file)) {
            return fs::path(env) / file;
        }
    }
    if (fs::exists(fs::path(POLARITON_SOURCE_PRESETS) / file)) {
        return fs::path(POLARITON_SOURCE_PRESETS) / file;
    }
    if (fs::exists(fs::path("presets") / file)) {
        return fs::path("presets") / file;
    }
    throw std::invalid_argument("no preset named '" + figure + "'");
}

RunReport run_subcommand(const std::string& name, const RunConfig& config, const fs::path& out_dir,
                         std::ostream& log)
{
    static const std::vector<std::string> known{"manifolds", "couplings", "stark", "spectrum", "validate", "figures"};
    if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw std::invalid_argument("unknown subcommand '" + name + "'");
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        throw std::runtime_error("cannot create output directory '" + out_dir.string() + "'");
    }

    RunReport report;
    if (name == "manifolds") {
        run_manifolds(config, out_dir, log, report);
    } else if (name == "couplings") {
        run_couplings(config, out_dir, log, report);
    } else if (name == "stark") {
        write_stark(config, out_dir / ("stark" + extension(config.output.format)), log, report);
    } else if (name == "spectrum") {
        write_spectrum(config, "spectrum", out_dir, log, report);
    } else if (name == "validate") {
        run_validate(config, out_dir, log, report);
    } else {
        run_figure(config, out_dir, log, report);
    }
    return report;
}

} // namespace polariton
