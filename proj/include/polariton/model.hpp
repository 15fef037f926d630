// model.hpp: Parameters, truncated bare basis and bare operators of the
// driven, damped four-level atom + cavity (EIT-Kerr) system.
//
// Conventions used throughout the library:
//   * hbar = 1 and every rate/detuning is a dimensionless multiple of one
//     reference rate (usually kappa = 1). drive_amplitude_from_power() is the
//     only dimensional entry point.
//   * Bare states |n, l> (n photons, atomic level l = 1..4) are stored at the
//     flat index 4*n + (l - 1).
//   * The Fock space holds n = 0..n_trunc-1; a^dagger annihilates the top
//     Fock state.

#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace polariton {

using cplx = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};

struct SystemParams {
    double g1{0.0};          // cavity coupling on |1> <-> |2>
    double g2{0.0};          // cavity coupling on |3> <-> |4>
    double omega_c{0.0};     // classical control Rabi frequency on |2> <-> |3>
    double delta{0.0};       // detuning of level 2
    double big_delta{0.0};   // detuning of level 4
    double gamma1{0.0};      // |2> -> |1>
    double gamma2{0.0};      // |2> -> |3>
    double gamma3{0.0};      // |4> -> |3>
    double kappa{1.0};       // cavity decay rate
    double ep{0.0};          // cavity drive amplitude
    int n_trunc{10};         // photon-number states 0..n_trunc-1

    // Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    bool operator==(const SystemParams&) const = default;
};

class BareBasis {
public:
    explicit BareBasis(int n_trunc);

    int n_trunc() const noexcept { return n_trunc_; }
    int dim() const noexcept { return 4 * n_trunc_; }

    // Throws std::invalid_argument for photons outside [0, n_trunc) or
    // level outside [1, 4].
    int index(int photons, int level) const;
    int photons(int flat) const noexcept { return flat / 4; }
    int level(int flat) const noexcept { return flat % 4 + 1; }

    // Excitation manifold of a bare state: n for level 1, n+1 for levels
    // 2 and 3, n+2 for level 4.
    int manifold(int flat) const noexcept;

    // Flat indices of the manifold-n bare states in the fixed order
    // (|n,1>, |n-1,2>, |n-1,3>, |n-2,4>); entries that do not exist (n too
    // small, or beyond the truncation) are empty.
    std::array<std::optional<int>, 4> manifold_slots(int n) const;

    // Highest manifold whose four (or three, for n = 1) bare states all fit
    // inside the truncated space.
    int top_complete_manifold() const noexcept { return n_trunc_ - 1; }

private:
    int n_trunc_;
};

// identity_photon (x) |i><j|
OperatorMatrix build_sigma(const BareBasis& basis, int i, int j);

// a (x) identity_atom with <n-1|a|n> = sqrt(n)
OperatorMatrix build_annihilation(const BareBasis& basis);

// delta s22 + Delta s44 + i g1 (a+ s12 - s21 a) + i Wc (s23 - s32)
//   + i g2 (a+ s34 - s43 a)
OperatorMatrix build_H0(const SystemParams& params, const BareBasis& basis);

// i Ep (a - a+)
OperatorMatrix build_Hd(const SystemParams& params, const BareBasis& basis);

// [sqrt(g1) s12, sqrt(g2) s32, sqrt(g3) s34, sqrt(kappa) a], fixed order.
std::vector<OperatorMatrix> build_collapse_ops(const SystemParams& params,
                                               const BareBasis& basis);

// -i [ kappa a+a + (g1+g2) s22 + g3 s44 ]
OperatorMatrix build_Hres(const SystemParams& params, const BareBasis& basis);

// H0 + Hd - i sum_k C_k+ C_k
OperatorMatrix build_Heff(const SystemParams& params, const BareBasis& basis);

// Drive amplitude sqrt(P kappa T^2 / (4 hbar omega_cav)) in SI units:
// power in W, kappa and omega_cav in rad/s, result in 1/s. kappa enters
// exactly as written in the drive formula; whether it is the HWHM or FWHM
// of the cavity line is left to the caller.
double drive_amplitude_from_power(double power, double kappa,
                                  double transmission, double omega_cav);

// max_ij |M_ij - conj(M_ji)|
double hermiticity_error(const OperatorMatrix& m);

// Debug dump: one "row col re im" line per nonzero entry.
void write_matrix_dump(std::ostream& out, const OperatorMatrix& m);

} // namespace polariton
