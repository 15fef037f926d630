// reduced.hpp: the driven {ground, resonant first-manifold polariton}
// doublet as an effective non-Hermitian two-level system.
//
// Basis order is (|e_0^(0)>, |e_0^(1)>). With p = |e_0^(0)><e_0^(1)|,
//   H_red = i W0 (p - p+) - i G0 p+p,
// whose eigenvalues are -i G0/2 +- sqrt(W0^2 - G0^2/4). We write each one as
// eps~ - i G~, so G~ >= 0 is a decay rate.

#pragma once

#include <array>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "polariton/model.hpp"

namespace polariton {

enum class Regime { weak, split, critical };

std::string_view to_string(Regime regime) noexcept;

struct StarkResult {
    double epsilon_plus{0.0};
    double epsilon_minus{0.0};
    double gamma_plus{0.0};
    double gamma_minus{0.0};
    Regime regime{Regime::weak};
    double omega0{0.0};       // W0 = Ep / sqrt(1 + (g1/Wc)^2)
    double gamma0{0.0};       // G0 = kappa / (1 + (g1/Wc)^2)
    double threshold_ep{0.0}; // Ep at which W0 = G0/2

    cplx eigenvalue_plus() const { return {epsilon_plus, -gamma_plus}; }
    cplx eigenvalue_minus() const { return {epsilon_minus, -gamma_minus}; }
};

// Relative width of the band around W0 = G0/2 reported as critical.
inline constexpr double kCriticalTol = 1e-12;

// All of these need omega_c > 0 and throw std::invalid_argument otherwise.
Eigen::Matrix2cd reduced_hamiltonian(const SystemParams& params);
StarkResult stark_eigenvalues(const SystemParams& params);

struct StarkStates {
    // in the reduced basis
    Eigen::Vector2cd plus;
    Eigen::Vector2cd minus;
    // the same states over the bare basis (|0,1>, |1,1>, |0,3>)
    StateVector bare_plus;
    StateVector bare_minus;
    // true outside the split regime: plus/minus are then the (normalized)
    // right eigenvectors of H_red, not the symmetric superpositions
    bool from_eigenvectors{false};
};

// Split regime: (|e_0^(0)> -+ i |e_0^(1)>)/sqrt(2) for the +/- branch.
StarkStates stark_states(const SystemParams& params, const BareBasis& basis);

struct MollowPrediction {
    bool has_sidebands{false};
    double center_linewidth{0.0};   // G0
    double sideband_linewidth{0.0}; // 3 G0 / 2
    double sideband_offset{0.0};    // eps~+ - eps~-, zero without sidebands
};

MollowPrediction mollow_predictions(const SystemParams& params);

struct SweepSample {
    double ep{0.0};
    StarkResult analytic;
    std::array<cplx, 2> numeric{}; // tracked branches of the full Heff
    double min_overlap{1.0};       // weakest continuation overlap
    bool ambiguous{false};

    // numeric pair sorted by real part, then imaginary part
    std::array<cplx, 2> numeric_sorted() const;
};

struct SweepOptions {
    int n_trunc{15};
    bool convergence_check{true}; // repeat at 2 n_trunc
};

struct SweepTrace {
    std::vector<SweepSample> samples;
    int n_trunc{15};
    double convergence_drift{0.0}; // max eigenvalue change at 2 n_trunc
    bool converged{true};          // drift < 1e-6 (true when not checked)
};

inline constexpr double kAmbiguityTol = 1e-3;
inline constexpr double kDriftTol = 1e-6;

// Follows the two eigenvalues of the full Heff that start (at Ep = 0) on
// |e_0^(0)> and |e_0^(1)>, continued by maximal eigenvector overlap. The
// n_trunc of params is replaced by options.n_trunc. ep_grid must be
// nonempty and strictly ascending.
SweepTrace stark_sweep(const SystemParams& params, const std::vector<double>& ep_grid,
                       const SweepOptions& options = {});

} // namespace polariton
