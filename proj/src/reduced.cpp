#include "polariton/reduced.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "polariton/dressed.hpp"

namespace polariton {

namespace {

void require_control(const SystemParams& params, const char* who)
{
    if (!(params.omega_c > 0.0)) {
        throw std::invalid_argument(std::string(who) + ": omega_c must be > 0");
    }
}

// (1 + r^2) with r = g1/Wc; the only combination the reduced model needs.
double mixing(const SystemParams& params)
{
    const double r = params.g1 / params.omega_c;
    return 1.0 + r * r;
}

struct Tracked {
    std::array<cplx, 2> values{};
    std::array<StateVector, 2> vectors;
    double min_overlap{1.0};
    bool ambiguous{false};
};

// Picks, for each previous vector, the eigenvector of Heff with the largest
// modulus overlap.
Tracked continue_branches(const Eigen::ComplexEigenSolver<Eigen::MatrixXcd>& solver,
                          const std::array<StateVector, 2>& previous)
{
    const Eigen::MatrixXcd& vecs = solver.eigenvectors();
    const Eigen::Index count = vecs.cols();
    Tracked out;
    Eigen::Index taken = -1;
    for (std::size_t b = 0; b < 2; ++b) {
        Eigen::Index best = -1;
        double best_overlap = -1.0;
        double runner_up = -1.0;
        for (Eigen::Index k = 0; k < count; ++k) {
            const double o = std::abs(previous[b].dot(vecs.col(k))) / vecs.col(k).norm();
            if (o > best_overlap) {
                runner_up = best_overlap;
                best_overlap = o;
                best = k;
            } else if (o > runner_up) {
                runner_up = o;
            }
        }
        if (best_overlap - runner_up < kAmbiguityTol) {
            out.ambiguous = true;
        }
        if (best == taken) {
            // both branches want the same eigenvector: give the second one its
            // next-best match and flag the sample
            out.ambiguous = true;
            double second = -1.0;
            for (Eigen::Index k = 0; k < count; ++k) {
                if (k == taken) {
                    continue;
                }
                const double o = std::abs(previous[b].dot(vecs.col(k))) / vecs.col(k).norm();
                if (o > second) {
                    second = o;
                    best = k;
                }
            }
            best_overlap = second;
        }
        taken = best;
        out.values[b] = solver.eigenvalues()[best];
        out.vectors[b] = vecs.col(best).normalized();
        out.min_overlap = std::min(out.min_overlap, best_overlap);
    }
    return out;
}

std::vector<SweepSample> track(const SystemParams& params, const std::vector<double>& ep_grid,
                               int n_trunc)
{
    SystemParams p = params;
    p.n_trunc = n_trunc;
    const BareBasis basis(n_trunc);

    std::array<StateVector, 2> previous{
        StateVector(StateVector::Zero(basis.dim())),
        embed(basis, first_manifold(p).states[first_manifold(p).position_of(0)])};
    previous[0][basis.index(0, 1)] = 1.0;

    std::vector<SweepSample> out;
    out.reserve(ep_grid.size());
    for (const double ep : ep_grid) {
        p.ep = ep;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(build_Heff(p, basis));
        const Tracked t = continue_branches(solver, previous);
        SweepSample s;
        s.ep = ep;
        s.analytic = stark_eigenvalues(p);
        s.numeric = t.values;
        s.min_overlap = t.min_overlap;
        s.ambiguous = t.ambiguous;
        out.push_back(s);
        previous = t.vectors;
    }
    return out;
}

} // namespace

std::string_view to_string(Regime regime) noexcept
{
    switch (regime) {
    case Regime::weak:
        return "weak";
    case Regime::split:
        return "split";
    case Regime::critical:
        return "critical";
    }
    return "weak";
}

Eigen::Matrix2cd reduced_hamiltonian(const SystemParams& params)
{
    require_control(params, "reduced_hamiltonian");
    const double m = mixing(params);
    const double omega0 = params.ep / std::sqrt(m);
    const double gamma0 = params.kappa / m;
    Eigen::Matrix2cd h;
    h << 0.0, I * omega0, -I * omega0, -I * gamma0;
    return h;
}

StarkResult stark_eigenvalues(const SystemParams& params)
{
    require_control(params, "stark_eigenvalues");
    const double m = mixing(params);
    StarkResult out;
    out.omega0 = params.ep / std::sqrt(m);
    out.gamma0 = params.kappa / m;
    out.threshold_ep = 0.5 * params.kappa / std::sqrt(m);

    const double half = out.gamma0 / 2.0;
    const double gap = out.omega0 - half;
    if (std::abs(gap) <= kCriticalTol * std::max(half, out.omega0)) {
        out.regime = Regime::critical;
        out.gamma_plus = out.gamma_minus = half;
    } else if (gap > 0.0) {
        out.regime = Regime::split;
        const double split = std::sqrt((out.omega0 - half) * (out.omega0 + half));
        out.epsilon_plus = split;
        out.epsilon_minus = -split;
        out.gamma_plus = out.gamma_minus = half;
    } else {
        out.regime = Regime::weak;
        const double spread = std::sqrt((half - out.omega0) * (half + out.omega0));
        out.gamma_plus = half + spread;
        out.gamma_minus = half - spread;
    }
    return out;
}

StarkStates stark_states(const SystemParams& params, const BareBasis& basis)
{
    const StarkResult stark = stark_eigenvalues(params);
    StarkStates out;
    if (stark.regime == Regime::split) {
        out.plus << 1.0, -I;
        out.minus << 1.0, I;
        out.plus /= std::sqrt(2.0);
        out.minus /= std::sqrt(2.0);
    } else {
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(reduced_hamiltonian(params));
        // the eigenvalue with the larger real part (then the smaller decay)
        // plays the role of the + branch
        Eigen::Index hi = 0;
        const auto& ev = solver.eigenvalues();
        if (ev[1].real() > ev[0].real() ||
            (ev[1].real() == ev[0].real() && ev[1].imag() > ev[0].imag())) {
            hi = 1;
        }
        out.plus = solver.eigenvectors().col(hi).normalized();
        out.minus = solver.eigenvectors().col(1 - hi).normalized();
        out.from_eigenvectors = true;
    }

    const StateVector ground = [&] {
        StateVector v = StateVector::Zero(basis.dim());
        v[basis.index(0, 1)] = 1.0;
        return v;
    }();
    const ManifoldSpectrum first = first_manifold(params);
    const StateVector resonant = embed(basis, first.states[first.position_of(0)]);
    out.bare_plus = out.plus[0] * ground + out.plus[1] * resonant;
    out.bare_minus = out.minus[0] * ground + out.minus[1] * resonant;
    return out;
}

MollowPrediction mollow_predictions(const SystemParams& params)
{
    const StarkResult stark = stark_eigenvalues(params);
    MollowPrediction out;
    out.center_linewidth = stark.gamma0;
    out.sideband_linewidth = 1.5 * stark.gamma0;
    if (stark.regime == Regime::split) {
        out.has_sidebands = true;
        out.sideband_offset = stark.epsilon_plus - stark.epsilon_minus;
    }
    return out;
}

std::array<cplx, 2> SweepSample::numeric_sorted() const
{
    std::array<cplx, 2> v = numeric;
    if (v[1].real() < v[0].real() || (v[1].real() == v[0].real() && v[1].imag() < v[0].imag())) {
        std::swap(v[0], v[1]);
    }
    return v;
}

SweepTrace stark_sweep(const SystemParams& params, const std::vector<double>& ep_grid,
                       const SweepOptions& options)
{
    require_control(params, "stark_sweep");
    if (ep_grid.empty()) {
        throw std::invalid_argument("stark_sweep: empty ep grid");
    }
    for (std::size_t k = 0; k < ep_grid.size(); ++k) {
        if (!std::isfinite(ep_grid[k]) || ep_grid[k] < 0.0 ||
            (k > 0 && !(ep_grid[k] > ep_grid[k - 1]))) {
            throw std::invalid_argument("stark_sweep: ep grid must be finite, >= 0, strictly ascending");
        }
    }
    if (options.n_trunc < 3) {
        throw std::invalid_argument("stark_sweep: n_trunc must be >= 3");
    }

    SweepTrace trace;
    trace.n_trunc = options.n_trunc;
    trace.samples = track(params, ep_grid, options.n_trunc);
    if (options.convergence_check) {
        const std::vector<SweepSample> wide = track(params, ep_grid, 2 * options.n_trunc);
        for (std::size_t k = 0; k < wide.size(); ++k) {
            if (wide[k].ambiguous || trace.samples[k].ambiguous) {
                continue;
            }
            const auto a = trace.samples[k].numeric_sorted();
            const auto b = wide[k].numeric_sorted();
            trace.convergence_drift =
                std::max({trace.convergence_drift, std::abs(a[0] - b[0]), std::abs(a[1] - b[1])});
        }
        trace.converged = trace.convergence_drift < kDriftTol;
    }
    return trace;
}

} // namespace polariton
