#include "polariton/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <lapacke.h>

namespace polariton {

namespace {

using Triplet = Eigen::Triplet<cplx>;
using SparseSolver = Eigen::SparseLU<SparseOperator, Eigen::COLAMDOrdering<int>>;

constexpr int kSubspaceIterations = 30;

struct Entry {
    int row;
    int col;
    cplx value;
};

std::vector<Entry> nonzeros(const OperatorMatrix& m)
{
    std::vector<Entry> out;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (m(r, c) != cplx{}) {
                out.push_back({static_cast<int>(r), static_cast<int>(c), m(r, c)});
            }
        }
    }
    return out;
}

// Adds scale * (B (x) A) to the triplet list.
void add_kron(std::vector<Triplet>& out, const std::vector<Entry>& b, const std::vector<Entry>& a,
              int dim, cplx scale)
{
    for (const Entry& eb : b) {
        for (const Entry& ea : a) {
            out.emplace_back(eb.row * dim + ea.row, eb.col * dim + ea.col, scale * eb.value * ea.value);
        }
    }
}

std::vector<Entry> identity_entries(int dim)
{
    std::vector<Entry> out;
    for (int k = 0; k < dim; ++k) {
        out.push_back({k, k, 1.0});
    }
    return out;
}

// Positions in valuePtr() of the diagonal entries, which build_liouvillian
// always stores explicitly.
std::vector<Eigen::Index> diagonal_slots(const SparseOperator& m)
{
    std::vector<Eigen::Index> out(static_cast<std::size_t>(m.cols()), -1);
    for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
        for (Eigen::Index p = m.outerIndexPtr()[c]; p < m.outerIndexPtr()[c + 1]; ++p) {
            if (m.innerIndexPtr()[p] == c) {
                out[static_cast<std::size_t>(c)] = p;
            }
        }
    }
    return out;
}

template <typename Fn>
void parallel_chunks(std::size_t count, int threads, Fn&& fn)
{
    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                                                        std::max<std::size_t>(count, 1));
    if (workers == 1) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo < hi) {
            pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
        }
    }
    for (auto& t : pool) {
        t.join();
    }
}

// L with its first row replaced by the trace functional. Trace
// preservation makes that row a combination of the others.
SparseOperator with_trace_row(const Liouvillian& liou)
{
    const int d = liou.dim;
    std::vector<Triplet> trip;
    for (Eigen::Index c = 0; c < liou.matrix.outerSize(); ++c) {
        for (SparseOperator::InnerIterator it(liou.matrix, c); it; ++it) {
            if (it.row() != 0) {
                trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
            }
        }
    }
    for (int k = 0; k < d; ++k) {
        trip.emplace_back(0, k * d + k, 1.0);
    }
    SparseOperator out(liou.matrix.rows(), liou.matrix.cols());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

} // namespace

Eigen::VectorXcd vectorize(const OperatorMatrix& m)
{
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

OperatorMatrix unvectorize(const Eigen::VectorXcd& v, int dim)
{
    return Eigen::Map<const OperatorMatrix>(v.data(), dim, dim);
}

OperatorMatrix Liouvillian::apply(const OperatorMatrix& rho) const
{
    return unvectorize(matrix * vectorize(rho), dim);
}

double Liouvillian::norm() const
{
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(matrix.rows());
    for (Eigen::Index c = 0; c < matrix.outerSize(); ++c) {
        for (SparseOperator::InnerIterator it(matrix, c); it; ++it) {
            rows[it.row()] += std::abs(it.value());
        }
    }
    return rows.size() == 0 ? 0.0 : rows.maxCoeff();
}

Liouvillian build_liouvillian(const SystemParams& params, const BareBasis& basis, long long super_cap)
{
    const long long dim = basis.dim();
    if (dim * dim > super_cap) {
        throw ResourceError("build_liouvillian: dimension " + std::to_string(dim * dim) +
                            " exceeds the cap " + std::to_string(super_cap));
    }
    const int d = basis.dim();
    const auto heff = nonzeros(build_Heff(params, basis));
    const auto heff_conj = nonzeros(build_Heff(params, basis).conjugate());
    const auto id = identity_entries(d);

    std::vector<Triplet> trip;
    add_kron(trip, id, heff, d, -I);
    add_kron(trip, heff_conj, id, d, I);
    for (const OperatorMatrix& c : build_collapse_ops(params, basis)) {
        add_kron(trip, nonzeros(c.conjugate()), nonzeros(c), d, 2.0);
    }
    for (int k = 0; k < d * d; ++k) {
        trip.emplace_back(k, k, 0.0);
    }

    Liouvillian out;
    out.dim = d;
    out.matrix.resize(d * d, d * d);
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    out.matrix.makeCompressed();
    return out;
}

SteadyState steady_state(const Liouvillian& liouvillian)
{
    const int d = liouvillian.dim;
    const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
    const double lnorm = std::max(liouvillian.norm(), std::numeric_limits<double>::min());

    // Null-space dimension: the two eigenvalues of L closest to a small
    // positive shift, by inverse subspace iteration. All eigenvalues have
    // Re <= 0, so L - shift is never singular.
    SparseOperator shifted = liouvillian.matrix;
    const double shift = 1e-6 * lnorm;
    for (const Eigen::Index p : diagonal_slots(shifted)) {
        shifted.valuePtr()[p] -= shift;
    }
    SparseSolver inverse;
    inverse.compute(shifted);
    if (inverse.info() != Eigen::Success) {
        throw std::runtime_error("steady_state: factorization of the shifted Liouvillian failed");
    }
    Eigen::MatrixXcd block(n, 2);
    block.col(0) = vectorize(OperatorMatrix::Identity(d, d)) / static_cast<double>(d);
    std::mt19937 rng(12345);
    std::normal_distribution<double> normal;
    for (Eigen::Index k = 0; k < n; ++k) {
        block(k, 1) = cplx(normal(rng), normal(rng));
    }
    for (int it = 0; it < kSubspaceIterations; ++it) {
        Eigen::MatrixXcd next(n, 2);
        next.col(0) = inverse.solve(block.col(0));
        next.col(1) = inverse.solve(block.col(1));
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(next);
        block = qr.householderQ() * Eigen::MatrixXcd::Identity(n, 2);
    }
    const Eigen::Matrix2cd ritz = block.adjoint() * (liouvillian.matrix * block);
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> small(ritz);
    std::array<double, 2> mags{std::abs(small.eigenvalues()[0]), std::abs(small.eigenvalues()[1])};
    std::sort(mags.begin(), mags.end());

    SteadyState out;
    out.smallest = mags[0] / lnorm;
    out.null_gap = mags[1] / lnorm;
    if (out.null_gap < kNullTol) {
        throw DegeneracyError("steady_state: Liouvillian null space is degenerate (second eigenvalue " +
                              std::to_string(mags[1]) + ")");
    }
    if (out.smallest >= kNullTol) {
        throw DegeneracyError("steady_state: Liouvillian has no zero eigenvalue (smallest " +
                              std::to_string(mags[0]) + ")");
    }

    // Accurate solve: the trace functional replaces the (dependent) first row.
    SparseSolver solver;
    solver.compute(with_trace_row(liouvillian));
    if (solver.info() != Eigen::Success) {
        throw DegeneracyError("steady_state: bordered Liouvillian is singular");
    }
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    rhs[0] = 1.0;
    OperatorMatrix rho = unvectorize(solver.solve(rhs), d);
    rho = (rho + rho.adjoint()) / 2.0;
    rho /= rho.trace();
    out.rho = rho;
    out.residual = (liouvillian.matrix * vectorize(rho)).cwiseAbs().maxCoeff() / lnorm;
    return out;
}

double tail_population(const BareBasis& basis, const OperatorMatrix& rho, int levels)
{
    double sum = 0.0;
    for (int k = 0; k < basis.dim(); ++k) {
        if (basis.photons(k) >= basis.n_trunc() - levels) {
            sum += rho(k, k).real();
        }
    }
    return sum;
}

double expectation(const OperatorMatrix& rho, const OperatorMatrix& op_matrix)
{
    return (rho * op_matrix).trace().real();
}

std::string_view to_string(SpectrumBackend backend) noexcept
{
    switch (backend) {
    case SpectrumBackend::schur:
        return "schur";
    case SpectrumBackend::sparse_lu:
        return "sparse_lu";
    case SpectrumBackend::eigendecomposition:
        return "eigendecomposition";
    }
    return "schur";
}

SpectrumBackend spectrum_backend_from_string(std::string_view name)
{
    if (name == "schur") {
        return SpectrumBackend::schur;
    }
    if (name == "sparse_lu") {
        return SpectrumBackend::sparse_lu;
    }
    if (name == "eigendecomposition") {
        return SpectrumBackend::eigendecomposition;
    }
    throw std::invalid_argument("unknown spectrum backend '" + std::string(name) + "'");
}

int default_thread_count()
{
    if (const char* env = std::getenv("POLARITON_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1024) {
            return static_cast<int>(v);
        }
    }
    return 1;
}

std::vector<double> linear_grid(double lo, double hi, int n)
{
    if (n < 2 || !(hi > lo)) {
        throw std::invalid_argument("linear_grid: need n >= 2 and hi > lo");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    const double step = (hi - lo) / (n - 1);
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = lo + step * k;
    }
    out.back() = hi;
    return out;
}

std::vector<double> regression_spectrum(const Liouvillian& liou, const OperatorMatrix& initial,
                                        const OperatorMatrix& probe_op, const std::vector<double>& omega_grid,
                                        const SpectrumOptions& options)
{
    const Eigen::Index n = static_cast<Eigen::Index>(liou.dim) * liou.dim;
    if (initial.rows() != liou.dim || initial.cols() != liou.dim || probe_op.rows() != liou.dim ||
        probe_op.cols() != liou.dim) {
        throw std::invalid_argument("regression_spectrum: operator dimension mismatch");
    }
    // int_0^inf e^{(L + i w) t} dt = -(L + i w)^-1
    const Eigen::VectorXcd rhs = -vectorize(initial);
    // Tr[P X] = sum_k vec(P^T)_k vec(X)_k
    const Eigen::VectorXcd probe = vectorize(probe_op.transpose());
    std::vector<double> out(omega_grid.size(), 0.0);
    const int threads = options.threads > 0 ? options.threads : default_thread_count();

    const double zero = kNullTol * liou.norm();

    if (options.backend == SpectrumBackend::schur) {
        if (n > options.schur_cap) {
            throw ResourceError("regression_spectrum: schur backend limited to dim^2 <= " +
                                std::to_string(options.schur_cap));
        }
        Eigen::MatrixXcd t(liou.matrix);
        Eigen::MatrixXcd z(n, n);
        Eigen::VectorXcd w(n);
        lapack_int sdim = 0;
        const lapack_int info = LAPACKE_zgees(
            LAPACK_COL_MAJOR, 'V', 'N', nullptr, static_cast<lapack_int>(n),
            reinterpret_cast<lapack_complex_double*>(t.data()), static_cast<lapack_int>(n), &sdim,
            reinterpret_cast<lapack_complex_double*>(w.data()),
            reinterpret_cast<lapack_complex_double*>(z.data()), static_cast<lapack_int>(n));
        if (info != 0) {
            throw std::runtime_error("regression_spectrum: Schur factorization failed (info " +
                                     std::to_string(info) + ")");
        }
        const Eigen::VectorXcd c = z.adjoint() * rhs;
        const Eigen::VectorXcd u = z.transpose() * probe;
        constexpr std::size_t batch = 32;
        const std::size_t batches = (omega_grid.size() + batch - 1) / batch;
        using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        parallel_chunks(batches, threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t bt = lo; bt < hi; ++bt) {
                const std::size_t first = bt * batch;
                const auto width =
                    static_cast<Eigen::Index>(std::min(batch, omega_grid.size() - first));
                RowMajor y = c.replicate(1, width);
                // back substitution on (T + i w), all columns at once
                for (Eigen::Index j = n - 1; j >= 0; --j) {
                    for (Eigen::Index b = 0; b < width; ++b) {
                        const cplx pivot = t(j, j) + I * omega_grid[first + static_cast<std::size_t>(b)];
                        // the stationary mode carries no fluctuation weight
                        y(j, b) = std::abs(pivot) < zero ? cplx{} : y(j, b) / pivot;
                    }
                    if (j > 0) {
                        y.topRows(j).noalias() -= t.col(j).head(j) * y.row(j);
                    }
                }
                const Eigen::RowVectorXcd s = u.transpose() * y;
                for (Eigen::Index b = 0; b < width; ++b) {
                    out[first + static_cast<std::size_t>(b)] = s[b].real();
                }
            }
        });
    } else if (options.backend == SpectrumBackend::sparse_lu) {
        const std::vector<Eigen::Index> diag = diagonal_slots(liou.matrix);
        const SparseOperator trace_bordered = with_trace_row(liou);
        parallel_chunks(omega_grid.size(), threads, [&](std::size_t lo, std::size_t hi) {
            SparseOperator shifted = liou.matrix;
            SparseSolver solver;
            solver.analyzePattern(shifted);
            for (std::size_t k = lo; k < hi; ++k) {
                const cplx iw = I * omega_grid[k];
                for (Eigen::Index c = 0; c < n; ++c) {
                    const Eigen::Index p = diag[static_cast<std::size_t>(c)];
                    shifted.valuePtr()[p] = liou.matrix.valuePtr()[p] + iw;
                }
                double s = std::numeric_limits<double>::quiet_NaN();
                if (std::abs(omega_grid[k]) < zero) {
                    // L itself is singular here; its first row is dependent and
                    // the trace-zero solution is the one with no stationary part
                    SparseSolver bordered;
                    bordered.compute(trace_bordered);
                    if (bordered.info() == Eigen::Success) {
                        Eigen::VectorXcd b = rhs;
                        b[0] = 0.0;
                        s = probe.transpose().dot(bordered.solve(b)).real();
                    }
                } else {
                    solver.factorize(shifted);
                    if (solver.info() == Eigen::Success) {
                        s = probe.transpose().dot(solver.solve(rhs)).real();
                    }
                }
                out[k] = s;
            }
        });
    } else {
        if (n > options.eigen_cap) {
            throw ResourceError("regression_spectrum: eigendecomposition backend limited to dim^2 <= " +
                                std::to_string(options.eigen_cap));
        }
        const Eigen::MatrixXcd dense(liou.matrix);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(dense);
        if (eig.info() != Eigen::Success) {
            throw std::runtime_error("regression_spectrum: Liouvillian eigendecomposition failed");
        }
        const Eigen::VectorXcd coeff = eig.eigenvectors().partialPivLu().solve(rhs);
        const Eigen::RowVectorXcd weight = probe.transpose() * eig.eigenvectors();
        for (std::size_t k = 0; k < omega_grid.size(); ++k) {
            const cplx iw = I * omega_grid[k];
            cplx sum{};
            for (Eigen::Index m = 0; m < n; ++m) {
                const cplx lambda = eig.eigenvalues()[m];
                if (std::abs(lambda) < zero) {
                    continue; // the stationary mode carries no fluctuation weight
                }
                sum += weight[m] * coeff[m] / (lambda + iw);
            }
            out[k] = sum.real();
        }
    }

    return out;
}

SpectrumTrace fluorescence_spectrum(const SystemParams& params, const BareBasis& basis,
                                    const std::vector<double>& omega_grid,
                                    const SpectrumOptions& options)
{
    for (const double w : omega_grid) {
        if (!std::isfinite(w)) {
            throw std::invalid_argument("fluorescence_spectrum: non-finite frequency");
        }
    }
    const Liouvillian liou = build_liouvillian(params, basis, options.super_cap);
    const SteadyState ss = steady_state(liou);
    const int d = basis.dim();

    const OperatorMatrix a = build_annihilation(basis);
    SpectrumTrace out;
    out.omega = omega_grid;
    out.backend = options.backend;
    out.mean_field = (ss.rho * a).trace();
    out.coherent_weight = std::norm(out.mean_field);
    out.photon_number = expectation(ss.rho, a.adjoint() * a);
    const OperatorMatrix da = a - out.mean_field * OperatorMatrix::Identity(d, d);
    out.fluctuation_number = expectation(ss.rho, da.adjoint() * da);
    out.tail_population = tail_population(basis, ss.rho);
    out.steady_residual = ss.residual;

    out.incoherent = regression_spectrum(liou, ss.rho * da.adjoint(), da, omega_grid, options);

    for (std::size_t k = 0; k < out.incoherent.size(); ++k) {
        if (!std::isfinite(out.incoherent[k])) {
            out.incoherent[k] = std::numeric_limits<double>::quiet_NaN();
            out.flagged.push_back(k);
        }
    }
    return out;
}

} // namespace polariton
