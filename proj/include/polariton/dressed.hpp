// dressed.hpp: Exact dressed states of H0, manifold by manifold, in the
// frame rotating at the cavity frequency.
//
// Manifold n is spanned by the bare states (|n,1>, |n-1,2>, |n-1,3>,
// |n-2,4>); a dressed state stores its amplitudes on these four slots as
// (alpha, beta, mu, nu). Slots that do not exist for small n are zero.

#pragma once

#include <string_view>
#include <vector>

#include "polariton/model.hpp"

namespace polariton {

enum class SpectrumPath { closed_form, numeric };

std::string_view to_string(SpectrumPath path) noexcept;

struct DressedState {
    int manifold{0};
    // 0 for the ground state, -1/0/+1 for n = 1, 1..4 (ascending energy)
    // for n >= 2.
    int label{0};
    double epsilon{0.0};
    Eigen::Vector4cd coeffs{Eigen::Vector4cd::Zero()};

    cplx alpha() const { return coeffs[0]; }
    cplx beta() const { return coeffs[1]; }
    cplx mu() const { return coeffs[2]; }
    cplx nu() const { return coeffs[3]; }
};

struct ManifoldSpectrum {
    int manifold{0};
    std::vector<DressedState> states; // ascending epsilon
    double sum_rule{0.0};             // 0, delta, or delta + Delta
    SpectrumPath path{SpectrumPath::closed_form};

    // Position of the state with the given label; throws if absent.
    std::size_t position_of(int label) const;
};

// Number of bare slots actually used by manifold n (1, 3 or 4).
int manifold_size(int n) noexcept;

// The H0 block of manifold n in the slot basis (1x1, 3x3 or 4x4).
Eigen::MatrixXcd manifold_block(const SystemParams& params, int n);

ManifoldSpectrum ground_manifold();

// Closed-form energies and amplitudes of the first manifold. With
// omega_c == 0 the result comes from numeric_manifold() instead.
ManifoldSpectrum first_manifold(const SystemParams& params);

// Closed-form (quartic) energies and amplitudes for n >= 2. Any
// ill-conditioned denominator, complex root residue, eigen-equation
// residual or orthonormality failure switches to numeric_manifold(); the
// returned path records which one was used.
ManifoldSpectrum manifold_n(const SystemParams& params, int n);

// Hermitian diagonalization of manifold_block(). Eigenvector phases are
// fixed so that the first component with modulus > 1e-10 is real positive.
ManifoldSpectrum numeric_manifold(const SystemParams& params, int n);

// ground_manifold / first_manifold / manifold_n by n.
ManifoldSpectrum dressed_manifold(const SystemParams& params, int n);

// The dressed state as a vector in the bare basis. Throws
// std::invalid_argument if the manifold does not fit the truncation.
StateVector embed(const BareBasis& basis, const DressedState& state);

// Closed-form quartic roots for manifold n >= 2, before any validation.
// Exposed for tests and diagnostics.
struct QuarticRoots {
    std::array<cplx, 4> roots{};
    cplx x{};     // the cube-root term
    cplx r{};     // sqrt(C^2/4 - 2A/3 + D)
    double scale{0.0};
};
QuarticRoots manifold_quartic_roots(const SystemParams& params, int n);

} // namespace polariton
