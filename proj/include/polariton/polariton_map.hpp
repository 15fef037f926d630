// polariton_map.hpp: Driving and damping written in the dressed-state
// (polariton) basis.
//
// Every table here has two independent routes: the coefficient formulas
// (sums over alpha/beta/mu/nu products) and a bare-basis bracket
// <e_i|H|e_j>. The routes must agree to kCrossCheckTol; a larger gap raises
// ConsistencyError, which almost always means a phase-convention bug.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "polariton/dressed.hpp"
#include "polariton/model.hpp"

namespace polariton {

inline constexpr double kCrossCheckTol = 1e-10;

class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// b_n = M_n d_n: row k expands bare slot k over the dressed states of
// manifold n, M(k, j) = conj(<slot k|e_j>).
struct TransformationMatrix {
    int manifold{1};
    Eigen::MatrixXcd matrix;
    SpectrumPath path{SpectrumPath::closed_form};
};

TransformationMatrix transformation_matrix(const SystemParams& params, int n);

// Part of the annihilation operator that lowers manifold n to n-1. Valid
// for 1 <= n <= n_trunc + 1; manifolds above n_trunc - 1 only partly fit
// the truncated space and keep the terms that do, so that the sum over all
// valid n reproduces build_annihilation() exactly.
OperatorMatrix annihilation_component(const BareBasis& basis, int n);

// Effective Rabi frequencies Omega_ij^(n,n-1); rows are states of manifold
// n-1 (ascending energy), columns states of manifold n.
struct CouplingTable {
    int manifold{1};
    Eigen::MatrixXcd omega;
    double max_bracket_deviation{0.0}; // vs <e_i|Hd|e_j> / i
    double max_closed_form_deviation{0.0}; // n = 1 only
};

CouplingTable rabi_table(const SystemParams& params, int n);

// Gamma_jk^(n); Hermitian, positive semidefinite.
struct DampingMatrix {
    int manifold{1};
    Eigen::MatrixXcd gamma;
    double max_bracket_deviation{0.0};     // vs <e_j|Hres|e_k> / (-i)
    double max_closed_form_deviation{0.0}; // n = 1 diagonal only
};

DampingMatrix damping_matrix(const SystemParams& params, int n);

// Gamma_jk / sqrt(Gamma_jj Gamma_kk); zero when either diagonal vanishes.
cplx cos_theta(const DampingMatrix& damping, int j, int k);

// Coefficients of p_j^(1)+ on {a+, s21, s31}, valid on the ground <-> first
// manifold sector.
struct FirstManifoldForm {
    cplx creation{};
    cplx sigma21{};
    cplx sigma31{};
};

struct PolaritonOperator {
    int manifold{1};
    int lower_label{0}; // i, state of manifold n-1
    int upper_label{0}; // j, state of manifold n
    OperatorMatrix matrix; // |e_i^(n-1)><e_j^(n)|
    std::optional<FirstManifoldForm> first_manifold_form;
    double first_manifold_form_deviation{0.0};
};

// Throws std::invalid_argument for labels that do not exist or a manifold
// outside [1, n_trunc - 1].
PolaritonOperator polariton_operator(const SystemParams& params, const BareBasis& basis, int n,
                                     int lower_label, int upper_label);

// p_j^(1) built from its FirstManifoldForm (the adjoint of
// creation a+ + sigma21 s21 + sigma31 s31) over the whole truncated space.
OperatorMatrix first_manifold_polariton(const BareBasis& basis, const FirstManifoldForm& form);

// S_ij^(n) = sqrt(Gamma_jj^(n)) p_ij^(n)
OperatorMatrix polariton_collapse_operator(const SystemParams& params, const BareBasis& basis,
                                           int n, int lower_label, int upper_label);

struct CommutatorReport {
    double resonant_deviation{0.0};         // [p0, p0+] vs (1 - r^2 D31)/(1 + r^2)
    double off_resonant_deviation{0.0};     // [p+-, p+-+] vs the exact form
    double off_resonant_printed_deviation{0.0}; // the same vs (r^2 + e^2 D21 - D31)/N^2
    double ground_expectation{0.0};         // <e_0^(0)|[p0, p0+]|e_0^(0)>
    bool passed{false};                     // both exact identities to 1e-10
};

// Commutators of the first-manifold polariton operators, compared on the
// states with photon number <= n_trunc - 2. The off-resonant identity is
//   [p+-, p+-+] = (r^2 - e^2 D21 - D31 + i e (s32 - s23)) / N+-^2
// with r = g1/Wc, e = eps+-/Wc; the variant without the s23/s32 terms and
// with +e^2 D21 is reported separately for comparison.
CommutatorReport commutator_check(const SystemParams& params, const BareBasis& basis);

struct PolaritonGenerator {
    int n_max{1};
    OperatorMatrix h0;   // sum eps_j |e_j><e_j|
    OperatorMatrix hd;   // i sum (Omega_ij p_ij - conj(Omega_ij) p_ij+)
    OperatorMatrix hres; // -i sum Gamma_jk |e_j><e_k|
    std::vector<DampingMatrix> damping; // n = 1..n_max

    OperatorMatrix total() const { return h0 + hd + hres; }
};

// Polariton-basis reconstruction of H0, Hd and Hres over manifolds 0..n_max
// (1 <= n_max <= n_trunc - 1). With keep_off_diagonal = false only the
// diagonal Gamma_jj terms enter hres.
PolaritonGenerator assemble_polariton_generator(const SystemParams& params,
                                                const BareBasis& basis, int n_max,
                                                bool keep_off_diagonal = true);

// Projector onto the bare states whose manifold is <= n_max.
OperatorMatrix manifold_projector(const BareBasis& basis, int n_max);

} // namespace polariton
