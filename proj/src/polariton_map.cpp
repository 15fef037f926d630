#include "polariton/polariton_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polariton {

namespace {

double sqrt_count(int k)
{
    return k > 0 ? std::sqrt(static_cast<double>(k)) : 0.0;
}

// Smallest basis in which manifold n is complete.
BareBasis local_basis(int n)
{
    return BareBasis(std::max(n + 1, 1));
}

void check_manifold(int n, const char* who)
{
    if (n < 1) {
        throw std::invalid_argument(std::string(who) + ": manifold must be >= 1");
    }
}

FirstManifoldForm first_manifold_form(const SystemParams& params, const DressedState& state)
{
    const double r = params.g1 / params.omega_c;
    FirstManifoldForm form;
    if (state.label == 0) {
        const double norm = std::sqrt(1.0 + r * r);
        form.creation = 1.0 / norm;
        form.sigma31 = r / norm;
    } else {
        const double e = state.epsilon / params.omega_c;
        const double norm = std::sqrt(1.0 + r * r + e * e);
        form.creation = -r / norm;
        form.sigma21 = I * e / norm;
        form.sigma31 = 1.0 / norm;
    }
    return form;
}

// Rows/columns with photon number <= n_trunc - 2.
double interior_deviation(const BareBasis& basis, const OperatorMatrix& lhs,
                          const OperatorMatrix& rhs)
{
    const int limit = 4 * (basis.n_trunc() - 1);
    return (lhs - rhs).topLeftCorner(limit, limit).cwiseAbs().maxCoeff();
}

} // namespace

TransformationMatrix transformation_matrix(const SystemParams& params, int n)
{
    check_manifold(n, "transformation_matrix");
    const ManifoldSpectrum spec = dressed_manifold(params, n);
    const int size = manifold_size(n);
    TransformationMatrix out;
    out.manifold = n;
    out.path = spec.path;
    out.matrix.resize(size, size);
    for (int j = 0; j < size; ++j) {
        out.matrix.col(j) = spec.states[static_cast<std::size_t>(j)].coeffs.head(size).conjugate();
    }
    return out;
}

OperatorMatrix annihilation_component(const BareBasis& basis, int n)
{
    if (n < 1 || n > basis.n_trunc() + 1) {
        throw std::invalid_argument("annihilation_component: manifold out of range");
    }
    OperatorMatrix a = OperatorMatrix::Zero(basis.dim(), basis.dim());
    const auto upper = basis.manifold_slots(n);
    const auto lower = basis.manifold_slots(n - 1);
    // slot k of manifold n lowers to slot k of manifold n-1 with amplitude
    // sqrt(photons in the upper bare state)
    for (std::size_t k = 0; k < 4; ++k) {
        if (upper[k] && lower[k]) {
            a(*lower[k], *upper[k]) = sqrt_count(basis.photons(*upper[k]));
        }
    }
    return a;
}

CouplingTable rabi_table(const SystemParams& params, int n)
{
    check_manifold(n, "rabi_table");
    const ManifoldSpectrum lower = dressed_manifold(params, n - 1);
    const ManifoldSpectrum upper = dressed_manifold(params, n);

    CouplingTable table;
    table.manifold = n;
    table.omega.resize(static_cast<Eigen::Index>(lower.states.size()),
                       static_cast<Eigen::Index>(upper.states.size()));
    const std::array<double, 4> amp{sqrt_count(n), sqrt_count(n - 1), sqrt_count(n - 1),
                                    sqrt_count(n - 2)};
    for (std::size_t i = 0; i < lower.states.size(); ++i) {
        for (std::size_t j = 0; j < upper.states.size(); ++j) {
            cplx sum{};
            for (std::size_t k = 0; k < 4; ++k) {
                sum += amp[k] * std::conj(lower.states[i].coeffs[static_cast<Eigen::Index>(k)]) *
                       upper.states[j].coeffs[static_cast<Eigen::Index>(k)];
            }
            table.omega(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = params.ep * sum;
        }
    }

    const BareBasis basis = local_basis(n);
    const OperatorMatrix hd = build_Hd(params, basis);
    for (std::size_t i = 0; i < lower.states.size(); ++i) {
        const StateVector bra = embed(basis, lower.states[i]);
        for (std::size_t j = 0; j < upper.states.size(); ++j) {
            const cplx bracket = bra.dot(hd * embed(basis, upper.states[j])) / I;
            table.max_bracket_deviation = std::max(
                table.max_bracket_deviation,
                std::abs(bracket - table.omega(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(j))));
        }
    }

    if (n == 1 && upper.path == SpectrumPath::closed_form) {
        const double r = params.g1 / params.omega_c;
        for (std::size_t j = 0; j < upper.states.size(); ++j) {
            const DressedState& s = upper.states[j];
            const double closed =
                s.label == 0 ? params.ep / std::sqrt(1.0 + r * r)
                             : -params.ep * params.g1 /
                                   std::sqrt(params.g1 * params.g1 +
                                             params.omega_c * params.omega_c + s.epsilon * s.epsilon);
            table.max_closed_form_deviation =
                std::max(table.max_closed_form_deviation,
                         std::abs(table.omega(0, static_cast<Eigen::Index>(j)) - closed));
        }
    }

    if (table.max_bracket_deviation > kCrossCheckTol) {
        throw ConsistencyError("rabi_table: coefficient and bracket routes disagree by " +
                               std::to_string(table.max_bracket_deviation));
    }
    return table;
}

DampingMatrix damping_matrix(const SystemParams& params, int n)
{
    check_manifold(n, "damping_matrix");
    const ManifoldSpectrum spec = dressed_manifold(params, n);
    const double nd = n;
    const std::array<double, 4> rate{nd * params.kappa,
                                     (nd - 1.0) * params.kappa + params.gamma1 + params.gamma2,
                                     (nd - 1.0) * params.kappa,
                                     n >= 2 ? (nd - 2.0) * params.kappa + params.gamma3 : 0.0};
    const auto size = static_cast<Eigen::Index>(spec.states.size());

    DampingMatrix out;
    out.manifold = n;
    out.gamma.resize(size, size);
    for (Eigen::Index j = 0; j < size; ++j) {
        for (Eigen::Index k = 0; k < size; ++k) {
            const auto& cj = spec.states[static_cast<std::size_t>(j)].coeffs;
            const auto& ck = spec.states[static_cast<std::size_t>(k)].coeffs;
            cplx sum{};
            for (Eigen::Index s = 0; s < 4; ++s) {
                sum += rate[static_cast<std::size_t>(s)] * std::conj(cj[s]) * ck[s];
            }
            out.gamma(j, k) = sum;
        }
    }

    const BareBasis basis = local_basis(n);
    const OperatorMatrix hres = build_Hres(params, basis);
    for (Eigen::Index j = 0; j < size; ++j) {
        const StateVector bra = embed(basis, spec.states[static_cast<std::size_t>(j)]);
        for (Eigen::Index k = 0; k < size; ++k) {
            const cplx bracket =
                bra.dot(hres * embed(basis, spec.states[static_cast<std::size_t>(k)])) / (-I);
            out.max_bracket_deviation =
                std::max(out.max_bracket_deviation, std::abs(bracket - out.gamma(j, k)));
        }
    }

    if (n == 1 && params.omega_c > 0.0) {
        const double r = params.g1 / params.omega_c;
        for (Eigen::Index j = 0; j < size; ++j) {
            const DressedState& s = spec.states[static_cast<std::size_t>(j)];
            const double e2 = s.epsilon * s.epsilon;
            const double closed =
                s.label == 0 ? params.kappa / (1.0 + r * r)
                             : (params.kappa * params.g1 * params.g1 +
                                (params.gamma1 + params.gamma2) * e2) /
                                   (params.g1 * params.g1 + params.omega_c * params.omega_c + e2);
            out.max_closed_form_deviation =
                std::max(out.max_closed_form_deviation, std::abs(out.gamma(j, j) - closed));
        }
    }

    if (out.max_bracket_deviation > kCrossCheckTol) {
        throw ConsistencyError("damping_matrix: coefficient and bracket routes disagree by " +
                               std::to_string(out.max_bracket_deviation));
    }
    return out;
}

cplx cos_theta(const DampingMatrix& damping, int j, int k)
{
    const double gjj = damping.gamma(j, j).real();
    const double gkk = damping.gamma(k, k).real();
    if (gjj <= 0.0 || gkk <= 0.0) {
        return {};
    }
    return damping.gamma(j, k) / std::sqrt(gjj * gkk);
}

PolaritonOperator polariton_operator(const SystemParams& params, const BareBasis& basis, int n,
                                     int lower_label, int upper_label)
{
    if (n < 1 || n > basis.top_complete_manifold()) {
        throw std::invalid_argument("polariton_operator: manifold out of range");
    }
    const ManifoldSpectrum lower = dressed_manifold(params, n - 1);
    const ManifoldSpectrum upper = dressed_manifold(params, n);
    const DressedState& lo = lower.states[lower.position_of(lower_label)];
    const DressedState& up = upper.states[upper.position_of(upper_label)];

    PolaritonOperator p;
    p.manifold = n;
    p.lower_label = lower_label;
    p.upper_label = upper_label;
    p.matrix = embed(basis, lo) * embed(basis, up).adjoint();

    if (n == 1 && params.omega_c > 0.0) {
        p.first_manifold_form = first_manifold_form(params, up);
        // a+, s21, s31 acting on |0,1> land in manifold 1, so F |0,1><0,1|
        // must equal p+ exactly.
        const OperatorMatrix form = first_manifold_polariton(basis, *p.first_manifold_form).adjoint();
        OperatorMatrix ground = OperatorMatrix::Zero(basis.dim(), basis.dim());
        ground(basis.index(0, 1), basis.index(0, 1)) = 1.0;
        p.first_manifold_form_deviation =
            (form * ground - OperatorMatrix(p.matrix.adjoint())).cwiseAbs().maxCoeff();
    }
    return p;
}

OperatorMatrix first_manifold_polariton(const BareBasis& basis, const FirstManifoldForm& form)
{
    const OperatorMatrix creation =
        form.creation * OperatorMatrix(build_annihilation(basis).adjoint()) +
        form.sigma21 * build_sigma(basis, 2, 1) + form.sigma31 * build_sigma(basis, 3, 1);
    return creation.adjoint();
}

OperatorMatrix polariton_collapse_operator(const SystemParams& params, const BareBasis& basis,
                                           int n, int lower_label, int upper_label)
{
    const PolaritonOperator p = polariton_operator(params, basis, n, lower_label, upper_label);
    const DampingMatrix damping = damping_matrix(params, n);
    const auto j = static_cast<Eigen::Index>(dressed_manifold(params, n).position_of(upper_label));
    // the single-index rate of the jump operator is the diagonal Gamma_jj
    return std::sqrt(std::max(damping.gamma(j, j).real(), 0.0)) * p.matrix;
}

CommutatorReport commutator_check(const SystemParams& params, const BareBasis& basis)
{
    if (basis.n_trunc() < 3) {
        throw std::invalid_argument("commutator_check: n_trunc must be >= 3");
    }
    if (!(params.omega_c > 0.0)) {
        throw std::invalid_argument("commutator_check: omega_c must be > 0");
    }
    const ManifoldSpectrum first = first_manifold(params);
    const double r = params.g1 / params.omega_c;
    const OperatorMatrix id = OperatorMatrix::Identity(basis.dim(), basis.dim());
    const OperatorMatrix d21 = build_sigma(basis, 2, 2) - build_sigma(basis, 1, 1);
    const OperatorMatrix d31 = build_sigma(basis, 3, 3) - build_sigma(basis, 1, 1);
    const OperatorMatrix s23 = build_sigma(basis, 2, 3);
    const OperatorMatrix s32 = build_sigma(basis, 3, 2);

    CommutatorReport report;
    for (const DressedState& s : first.states) {
        const OperatorMatrix p = first_manifold_polariton(basis, first_manifold_form(params, s));
        const OperatorMatrix comm = p * p.adjoint() - p.adjoint() * p;
        if (s.label == 0) {
            const OperatorMatrix rhs = (id - r * r * d31) / (1.0 + r * r);
            report.resonant_deviation = interior_deviation(basis, comm, rhs);
            report.ground_expectation =
                comm(basis.index(0, 1), basis.index(0, 1)).real();
        } else {
            const double e = s.epsilon / params.omega_c;
            const double norm2 = 1.0 + r * r + e * e;
            const OperatorMatrix exact =
                (r * r * id - e * e * d21 - d31 + I * e * (s32 - s23)) / norm2;
            const OperatorMatrix printed = (r * r * id + e * e * d21 - d31) / norm2;
            report.off_resonant_deviation =
                std::max(report.off_resonant_deviation, interior_deviation(basis, comm, exact));
            report.off_resonant_printed_deviation = std::max(
                report.off_resonant_printed_deviation, interior_deviation(basis, comm, printed));
        }
    }
    report.passed = report.resonant_deviation <= kCrossCheckTol &&
                    report.off_resonant_deviation <= kCrossCheckTol;
    return report;
}

OperatorMatrix manifold_projector(const BareBasis& basis, int n_max)
{
    OperatorMatrix p = OperatorMatrix::Zero(basis.dim(), basis.dim());
    for (int k = 0; k < basis.dim(); ++k) {
        if (basis.manifold(k) <= n_max) {
            p(k, k) = 1.0;
        }
    }
    return p;
}

PolaritonGenerator assemble_polariton_generator(const SystemParams& params,
                                                const BareBasis& basis, int n_max,
                                                bool keep_off_diagonal)
{
    if (n_max < 1 || n_max > basis.top_complete_manifold()) {
        throw std::invalid_argument("assemble_polariton_generator: n_max out of range");
    }
    const int dim = basis.dim();
    PolaritonGenerator gen;
    gen.n_max = n_max;
    gen.h0 = OperatorMatrix::Zero(dim, dim);
    gen.hd = OperatorMatrix::Zero(dim, dim);
    gen.hres = OperatorMatrix::Zero(dim, dim);

    std::vector<StateVector> lower{embed(basis, ground_manifold().states.front())};
    for (int n = 1; n <= n_max; ++n) {
        const ManifoldSpectrum spec = dressed_manifold(params, n);
        std::vector<StateVector> upper;
        for (const DressedState& s : spec.states) {
            upper.push_back(embed(basis, s));
            gen.h0 += s.epsilon * upper.back() * upper.back().adjoint();
        }

        const CouplingTable table = rabi_table(params, n);
        for (std::size_t i = 0; i < lower.size(); ++i) {
            for (std::size_t j = 0; j < upper.size(); ++j) {
                // Omega p + h.c.; the table is complex once n >= 2
                const OperatorMatrix p = lower[i] * upper[j].adjoint();
                const cplx w = table.omega(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                gen.hd += I * w * p - I * std::conj(w) * OperatorMatrix(p.adjoint());
            }
        }

        DampingMatrix damping = damping_matrix(params, n);
        for (std::size_t j = 0; j < upper.size(); ++j) {
            for (std::size_t k = 0; k < upper.size(); ++k) {
                if (j != k && !keep_off_diagonal) {
                    continue;
                }
                gen.hres += -I * damping.gamma(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) *
                            upper[j] * upper[k].adjoint();
            }
        }
        gen.damping.push_back(std::move(damping));
        lower = std::move(upper);
    }
    return gen;
}

} // namespace polariton
