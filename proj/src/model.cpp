#include "polariton/model.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace polariton {

namespace {

void require_rate(double value, const char* name)
{
    if (!std::isfinite(value) || value < 0.0) {
        throw std::invalid_argument(std::string("SystemParams: ") + name +
                                    " must be finite and >= 0");
    }
}

void require_finite(double value, const char* name)
{
    if (!std::isfinite(value)) {
        throw std::invalid_argument(std::string("SystemParams: ") + name + " must be finite");
    }
}

} // namespace

void SystemParams::validate() const
{
    require_rate(g1, "g1");
    require_rate(g2, "g2");
    require_rate(omega_c, "omega_c");
    require_finite(delta, "delta");
    require_finite(big_delta, "big_delta");
    require_rate(gamma1, "gamma1");
    require_rate(gamma2, "gamma2");
    require_rate(gamma3, "gamma3");
    require_rate(kappa, "kappa");
    require_rate(ep, "ep");
    if (n_trunc < 3) {
        throw std::invalid_argument("SystemParams: n_trunc must be >= 3");
    }
}

BareBasis::BareBasis(int n_trunc) : n_trunc_(n_trunc)
{
    if (n_trunc < 1) {
        throw std::invalid_argument("BareBasis: n_trunc must be >= 1");
    }
}

int BareBasis::index(int photons, int level) const
{
    if (photons < 0 || photons >= n_trunc_) {
        throw std::invalid_argument("BareBasis: photon number out of range");
    }
    if (level < 1 || level > 4) {
        throw std::invalid_argument("BareBasis: atomic level must be in 1..4");
    }
    return 4 * photons + (level - 1);
}

int BareBasis::manifold(int flat) const noexcept
{
    switch (level(flat)) {
    case 1: return photons(flat);
    case 4: return photons(flat) + 2;
    default: return photons(flat) + 1;
    }
}

std::array<std::optional<int>, 4> BareBasis::manifold_slots(int n) const
{
    std::array<std::optional<int>, 4> slots{};
    const std::array<std::pair<int, int>, 4> wanted{{{n, 1}, {n - 1, 2}, {n - 1, 3}, {n - 2, 4}}};
    for (std::size_t k = 0; k < wanted.size(); ++k) {
        const auto [photons, level] = wanted[k];
        if (photons >= 0 && photons < n_trunc_) {
            slots[k] = index(photons, level);
        }
    }
    return slots;
}

OperatorMatrix build_sigma(const BareBasis& basis, int i, int j)
{
    if (i < 1 || i > 4 || j < 1 || j > 4) {
        throw std::invalid_argument("build_sigma: atomic level must be in 1..4");
    }
    OperatorMatrix s = OperatorMatrix::Zero(basis.dim(), basis.dim());
    for (int n = 0; n < basis.n_trunc(); ++n) {
        s(basis.index(n, i), basis.index(n, j)) = 1.0;
    }
    return s;
}

OperatorMatrix build_annihilation(const BareBasis& basis)
{
    OperatorMatrix a = OperatorMatrix::Zero(basis.dim(), basis.dim());
    for (int n = 1; n < basis.n_trunc(); ++n) {
        for (int level = 1; level <= 4; ++level) {
            a(basis.index(n - 1, level), basis.index(n, level)) = std::sqrt(static_cast<double>(n));
        }
    }
    return a;
}

OperatorMatrix build_H0(const SystemParams& params, const BareBasis& basis)
{
    const OperatorMatrix a = build_annihilation(basis);
    const OperatorMatrix ad = a.adjoint();
    const auto s = [&](int i, int j) { return build_sigma(basis, i, j); };

    OperatorMatrix h = params.delta * s(2, 2) + params.big_delta * s(4, 4);
    h += I * params.g1 * (ad * s(1, 2) - s(2, 1) * a);
    h += I * params.omega_c * (s(2, 3) - s(3, 2));
    h += I * params.g2 * (ad * s(3, 4) - s(4, 3) * a);
    return h;
}

OperatorMatrix build_Hd(const SystemParams& params, const BareBasis& basis)
{
    const OperatorMatrix a = build_annihilation(basis);
    return I * params.ep * (a - OperatorMatrix(a.adjoint()));
}

std::vector<OperatorMatrix> build_collapse_ops(const SystemParams& params,
                                               const BareBasis& basis)
{
    return {
        std::sqrt(params.gamma1) * build_sigma(basis, 1, 2),
        std::sqrt(params.gamma2) * build_sigma(basis, 3, 2),
        std::sqrt(params.gamma3) * build_sigma(basis, 3, 4),
        std::sqrt(params.kappa) * build_annihilation(basis),
    };
}

OperatorMatrix build_Hres(const SystemParams& params, const BareBasis& basis)
{
    const OperatorMatrix a = build_annihilation(basis);
    const OperatorMatrix rates = params.kappa * a.adjoint() * a +
                                 (params.gamma1 + params.gamma2) * build_sigma(basis, 2, 2) +
                                 params.gamma3 * build_sigma(basis, 4, 4);
    return -I * rates;
}

OperatorMatrix build_Heff(const SystemParams& params, const BareBasis& basis)
{
    OperatorMatrix h = build_H0(params, basis) + build_Hd(params, basis);
    OperatorMatrix decay = OperatorMatrix::Zero(basis.dim(), basis.dim());
    for (const auto& c : build_collapse_ops(params, basis)) {
        decay += c.adjoint() * c;
    }
    h -= I * decay;
    return h;
}

double drive_amplitude_from_power(double power, double kappa, double transmission,
                                  double omega_cav)
{
    constexpr double hbar = 1.054571817e-34; // J s
    if (!(omega_cav > 0.0)) {
        throw std::invalid_argument("drive_amplitude_from_power: omega_cav must be > 0");
    }
    if (power < 0.0 || kappa < 0.0 || transmission < 0.0) {
        throw std::invalid_argument("drive_amplitude_from_power: inputs must be >= 0");
    }
    return std::sqrt(power * kappa * transmission * transmission / (4.0 * hbar * omega_cav));
}

double hermiticity_error(const OperatorMatrix& m)
{
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("hermiticity_error: matrix is not square");
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void write_matrix_dump(std::ostream& out, const OperatorMatrix& m)
{
    const auto flags = out.flags();
    out << std::setprecision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (m(r, c) != cplx{}) {
                out << r << ' ' << c << ' ' << m(r, c).real() << ' ' << m(r, c).imag() << '\n';
            }
        }
    }
    out.flags(flags);
}

} // namespace polariton
