#include "polariton/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace polariton {

namespace {

constexpr double kDenominatorTol = 1e-7;
constexpr double kImagTol = 1e-9;
constexpr double kResidualTol = 1e-8;
constexpr double kOrthoTol = 1e-10;
constexpr double kPhaseTol = 1e-10;

double block_scale(const Eigen::MatrixXcd& block)
{
    return block.size() == 0 ? 0.0 : block.cwiseAbs().maxCoeff();
}

// True when every eigenpair solves the block to kResidualTol and the set is
// orthonormal to kOrthoTol.
bool eigenpairs_valid(const Eigen::MatrixXcd& block, const ManifoldSpectrum& spec)
{
    const int size = static_cast<int>(block.rows());
    const double norm = std::max(block.norm(), 1e-300);
    Eigen::MatrixXcd vecs(size, spec.states.size());
    for (std::size_t k = 0; k < spec.states.size(); ++k) {
        const Eigen::VectorXcd v = spec.states[k].coeffs.head(size);
        if ((block * v - spec.states[k].epsilon * v).norm() >= kResidualTol * norm) {
            return false;
        }
        vecs.col(static_cast<Eigen::Index>(k)) = v;
    }
    const Eigen::MatrixXcd gram = vecs.adjoint() * vecs;
    return (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <
           kOrthoTol;
}

} // namespace

std::string_view to_string(SpectrumPath path) noexcept
{
    return path == SpectrumPath::closed_form ? "closed-form" : "numeric";
}

std::size_t ManifoldSpectrum::position_of(int label) const
{
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].label == label) {
            return k;
        }
    }
    throw std::invalid_argument("ManifoldSpectrum: no state with label " + std::to_string(label));
}

int manifold_size(int n) noexcept
{
    return n == 0 ? 1 : (n == 1 ? 3 : 4);
}

Eigen::MatrixXcd manifold_block(const SystemParams& params, int n)
{
    if (n < 0) {
        throw std::invalid_argument("manifold_block: n must be >= 0");
    }
    const int size = manifold_size(n);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(size, size);
    if (n == 0) {
        return h;
    }
    const double rn = std::sqrt(static_cast<double>(n));
    h(1, 1) = params.delta;
    h(0, 1) = I * params.g1 * rn;
    h(1, 0) = -I * params.g1 * rn;
    h(1, 2) = I * params.omega_c;
    h(2, 1) = -I * params.omega_c;
    if (n >= 2) {
        const double rm = std::sqrt(static_cast<double>(n - 1));
        h(3, 3) = params.big_delta;
        h(2, 3) = I * params.g2 * rm;
        h(3, 2) = -I * params.g2 * rm;
    }
    return h;
}

ManifoldSpectrum ground_manifold()
{
    ManifoldSpectrum spec;
    spec.manifold = 0;
    DressedState g;
    g.coeffs[0] = 1.0;
    spec.states.push_back(g);
    return spec;
}

ManifoldSpectrum numeric_manifold(const SystemParams& params, int n)
{
    if (n < 1) {
        throw std::invalid_argument("numeric_manifold: n must be >= 1");
    }
    const Eigen::MatrixXcd block = manifold_block(params, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block);

    ManifoldSpectrum spec;
    spec.manifold = n;
    spec.path = SpectrumPath::numeric;
    spec.sum_rule = n == 1 ? params.delta : params.delta + params.big_delta;
    const int size = static_cast<int>(block.rows());
    for (int k = 0; k < size; ++k) {
        Eigen::VectorXcd v = solver.eigenvectors().col(k);
        for (int c = 0; c < size; ++c) {
            if (std::abs(v[c]) > kPhaseTol) {
                v *= std::conj(v[c]) / std::abs(v[c]);
                v[c] = std::abs(v[c]);
                break;
            }
        }
        DressedState s;
        s.manifold = n;
        s.label = n == 1 ? k - 1 : k + 1;
        s.epsilon = solver.eigenvalues()[k];
        s.coeffs.head(size) = v;
        spec.states.push_back(s);
    }
    return spec;
}

ManifoldSpectrum first_manifold(const SystemParams& params)
{
    if (!(params.omega_c > 0.0)) {
        return numeric_manifold(params, 1);
    }
    const double ratio = params.g1 / params.omega_c;
    const double root = std::sqrt(params.delta * params.delta / 4.0 +
                                  params.omega_c * params.omega_c * (1.0 + ratio * ratio));

    ManifoldSpectrum spec;
    spec.manifold = 1;
    spec.sum_rule = params.delta;
    spec.path = SpectrumPath::closed_form;

    const auto off_resonant = [&](int label, double eps) {
        const double e = eps / params.omega_c;
        const double norm = std::sqrt(1.0 + ratio * ratio + e * e);
        DressedState s;
        s.manifold = 1;
        s.label = label;
        s.epsilon = eps;
        s.coeffs << -ratio / norm, I * e / norm, 1.0 / norm, 0.0;
        return s;
    };

    const double norm0 = std::sqrt(1.0 + ratio * ratio);
    DressedState resonant;
    resonant.manifold = 1;
    resonant.label = 0;
    resonant.epsilon = 0.0;
    resonant.coeffs << 1.0 / norm0, 0.0, ratio / norm0, 0.0;

    spec.states.push_back(off_resonant(-1, params.delta / 2.0 - root));
    spec.states.push_back(resonant);
    spec.states.push_back(off_resonant(+1, params.delta / 2.0 + root));
    return spec;
}

QuarticRoots manifold_quartic_roots(const SystemParams& params, int n)
{
    if (n < 2) {
        throw std::invalid_argument("manifold_quartic_roots: n must be >= 2");
    }
    const double nd = n;
    const double g1s = params.g1 * params.g1;
    const double g2s = params.g2 * params.g2;
    const double wcs = params.omega_c * params.omega_c;
    const double dl = params.delta;
    const double bd = params.big_delta;

    // eps^4 - C eps^3 + A eps^2 + B eps + G^2 = 0
    const double a = bd * dl - g1s * nd - g2s * (nd - 1.0) - wcs;
    const double c = bd + dl;
    const double b = bd * (g1s * nd + wcs) + dl * g2s * (nd - 1.0);
    const double gg = g1s * g2s * nd * (nd - 1.0);

    const double x1 = 2.0 * a * a * a + 9.0 * a * b * c - 72.0 * a * gg + 27.0 * (b * b + c * c * gg);
    const double x2 = a * a + 3.0 * b * c + 12.0 * gg;

    // Either square-root branch gives the same roots; take the one that
    // avoids cancellation in x1 + sqrt(...).
    cplx disc = std::sqrt(cplx(x1 * x1 - 4.0 * x2 * x2 * x2));
    if (std::abs(x1 - disc) > std::abs(x1 + disc)) {
        disc = -disc;
    }
    QuarticRoots out;
    out.scale = block_scale(manifold_block(params, n));
    out.x = std::pow(x1 + disc, 1.0 / 3.0);
    if (std::abs(out.x) < kDenominatorTol * out.scale * out.scale || out.x == cplx{}) {
        out.roots.fill(cplx(std::nan(""), 0.0));
        return out;
    }
    const cplx y = x2 / out.x;
    const cplx d = (std::cbrt(2.0) * y + out.x / std::cbrt(2.0)) / 3.0;
    out.r = std::sqrt(c * c / 4.0 - 2.0 * a / 3.0 + d);
    if (std::abs(out.r) < kDenominatorTol * out.scale) {
        out.roots.fill(cplx(std::nan(""), 0.0));
        return out;
    }
    const cplx t = (2.0 * b + a * c - c * c * c / 4.0) / out.r;
    const cplx lower = std::sqrt(c * c / 2.0 - 4.0 * a / 3.0 - d + t);
    const cplx upper = std::sqrt(c * c / 2.0 - 4.0 * a / 3.0 - d - t);
    out.roots = {c / 4.0 - out.r / 2.0 - lower / 2.0, c / 4.0 - out.r / 2.0 + lower / 2.0,
                 c / 4.0 + out.r / 2.0 - upper / 2.0, c / 4.0 + out.r / 2.0 + upper / 2.0};
    return out;
}

ManifoldSpectrum manifold_n(const SystemParams& params, int n)
{
    if (n < 2) {
        throw std::invalid_argument("manifold_n: n must be >= 2");
    }
    const Eigen::MatrixXcd block = manifold_block(params, n);
    const double scale = block_scale(block);
    const double tol = kDenominatorTol * scale;
    if (scale == 0.0 || params.omega_c <= tol || params.g2 <= tol) {
        return numeric_manifold(params, n);
    }

    const QuarticRoots quartic = manifold_quartic_roots(params, n);
    std::array<double, 4> eps{};
    for (int k = 0; k < 4; ++k) {
        const cplx root = quartic.roots[static_cast<std::size_t>(k)];
        if (!std::isfinite(root.real()) ||
            std::abs(root.imag()) >= kImagTol * std::max(1.0, std::abs(root.real()))) {
            return numeric_manifold(params, n);
        }
        eps[static_cast<std::size_t>(k)] = root.real();
    }
    std::sort(eps.begin(), eps.end());

    const double nd = n;
    const double g2m = params.g2 * std::sqrt(nd - 1.0);
    ManifoldSpectrum spec;
    spec.manifold = n;
    spec.sum_rule = params.delta + params.big_delta;
    spec.path = SpectrumPath::closed_form;
    for (int k = 0; k < 4; ++k) {
        const double e = eps[static_cast<std::size_t>(k)];
        if (std::abs(e) < tol) {
            return numeric_manifold(params, n);
        }
        const double detuned = (e - params.big_delta) / g2m;
        const double bracket = 1.0 - e * (e - params.big_delta) / (g2m * g2m);
        const double ratio = g2m / params.omega_c;
        const double g1e = params.g1 / e;
        const double nu = 1.0 / std::sqrt(1.0 + detuned * detuned +
                                          ratio * ratio * (1.0 + nd * g1e * g1e) * bracket * bracket);
        DressedState s;
        s.manifold = n;
        s.label = k + 1;
        s.epsilon = e;
        s.coeffs << I * params.g1 * std::sqrt(nd) * g2m / (e * params.omega_c) * bracket * nu,
            ratio * bracket * nu, I * detuned * nu, nu;
        spec.states.push_back(s);
    }
    if (!eigenpairs_valid(block, spec)) {
        return numeric_manifold(params, n);
    }
    return spec;
}

ManifoldSpectrum dressed_manifold(const SystemParams& params, int n)
{
    if (n < 0) {
        throw std::invalid_argument("dressed_manifold: n must be >= 0");
    }
    if (n == 0) {
        return ground_manifold();
    }
    return n == 1 ? first_manifold(params) : manifold_n(params, n);
}

StateVector embed(const BareBasis& basis, const DressedState& state)
{
    if (state.manifold > basis.top_complete_manifold()) {
        throw std::invalid_argument("embed: manifold exceeds the truncated basis");
    }
    StateVector v = StateVector::Zero(basis.dim());
    const auto slots = basis.manifold_slots(state.manifold);
    for (int k = 0; k < manifold_size(state.manifold); ++k) {
        v[*slots[static_cast<std::size_t>(k)]] = state.coeffs[k];
    }
    return v;
}

} // namespace polariton
