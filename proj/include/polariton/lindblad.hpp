// lindblad.hpp: master equation, steady state and the steady-state
// fluorescence spectrum of the cavity output.
//
// The generator is taken literally as
//   d rho/dt = -i (Heff rho - rho Heff+) + 2 sum_k C_k rho C_k+
// with Heff = H0 + Hd - i sum_k C_k+ C_k, i.e. every channel damps at twice
// the rate of the usual Lindblad form: an empty cavity field decays as
// exp(-kappa t) and its spectrum is a Lorentzian of HWHM kappa.
//
// Vectorization is column stacking, vec(A X B) = (B^T (x) A) vec(X), so
//   L = -i (1 (x) Heff - conj(Heff) (x) 1) + 2 sum_k conj(C_k) (x) C_k.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Sparse>

#include "polariton/model.hpp"

namespace polariton {

using SparseOperator = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Default cap on the Liouvillian dimension dim^2 (n_trunc = 40 fits).
inline constexpr long long kDefaultSuperCap = 40000;

struct Liouvillian {
    int dim{0}; // Hilbert-space dimension; the matrix is dim^2 x dim^2
    SparseOperator matrix;

    OperatorMatrix apply(const OperatorMatrix& rho) const;
    double norm() const; // max absolute row sum
};

Liouvillian build_liouvillian(const SystemParams& params, const BareBasis& basis,
                              long long super_cap = kDefaultSuperCap);

Eigen::VectorXcd vectorize(const OperatorMatrix& m);
OperatorMatrix unvectorize(const Eigen::VectorXcd& v, int dim);

struct SteadyState {
    OperatorMatrix rho;
    double residual{0.0};        // ||L vec(rho)||_inf / ||L||
    double null_gap{0.0};        // |second-smallest eigenvalue| / ||L||
    double smallest{0.0};        // |smallest eigenvalue| / ||L||
};

// Relative size below which a Liouvillian eigenvalue counts as zero.
inline constexpr double kNullTol = 1e-8;

// Throws DegeneracyError when more than one eigenvalue of L lies within
// kNullTol * ||L|| of zero (decoupled sectors, dark states).
SteadyState steady_state(const Liouvillian& liouvillian);

// Population of the top `levels` Fock states.
double tail_population(const BareBasis& basis, const OperatorMatrix& rho, int levels = 2);

double expectation(const OperatorMatrix& rho, const OperatorMatrix& op_matrix);

// schur: one dense complex Schur factorization L = Q T Q+, then a
//   triangular solve of (T + i w) per frequency (default).
// sparse_lu: one sparse LU of (L + i w) per frequency; cheap for short
//   grids, slow for long ones at n_trunc ~ 15.
// eigendecomposition: dense L = V diag(l) V^-1; for cross-checks at small
//   n_trunc only, since V can be ill-conditioned.
enum class SpectrumBackend { schur, sparse_lu, eigendecomposition };

std::string_view to_string(SpectrumBackend backend) noexcept;
SpectrumBackend spectrum_backend_from_string(std::string_view name);

struct SpectrumOptions {
    SpectrumBackend backend{SpectrumBackend::schur};
    int threads{0};                      // 0: POLARITON_THREADS or 1
    long long super_cap{kDefaultSuperCap};
    long long schur_cap{6400};           // dim^2 limit of the schur backend
    long long eigen_cap{1600};           // dim^2 limit of eigendecomposition
};

// Thread count from POLARITON_THREADS (>= 1), or 1 when unset/invalid.
int default_thread_count();

struct SpectrumTrace {
    std::vector<double> omega;
    std::vector<double> incoherent; // S(w) of the fluctuation a - <a>
    cplx mean_field{};              // <a>_ss
    double coherent_weight{0.0};    // |<a>_ss|^2, weight of the w = 0 delta
    double photon_number{0.0};      // <a+a>_ss
    double fluctuation_number{0.0}; // <da+ da>_ss; integral of S is pi times this
    double tail_population{0.0};
    double steady_residual{0.0};
    std::vector<std::size_t> flagged; // samples whose solve failed (NaN)
    SpectrumBackend backend{SpectrumBackend::schur};
};

// S(w) = Re int_0^inf dtau <da+(0) da(tau)>_ss exp(i w tau), evaluated as
//   S(w) = Re Tr[ da x ],  (i w + L) x = -vec(rho_ss da+).
// Positive w is emission above the cavity frequency.
SpectrumTrace fluorescence_spectrum(const SystemParams& params, const BareBasis& basis,
                                    const std::vector<double>& omega_grid,
                                    const SpectrumOptions& options = {});

// Re int_0^inf dtau Tr[probe e^{L tau}(initial)] exp(i w tau) by the chosen
// backend, without the contribution of the stationary mode (a delta at
// w = 0). The sparse_lu sample at w = 0 assumes Tr[initial] = 0.
std::vector<double> regression_spectrum(const Liouvillian& liouvillian, const OperatorMatrix& initial,
                                        const OperatorMatrix& probe, const std::vector<double>& omega_grid,
                                        const SpectrumOptions& options = {});

// n points evenly spanning [lo, hi] (n >= 2).
std::vector<double> linear_grid(double lo, double hi, int n);

} // namespace polariton
