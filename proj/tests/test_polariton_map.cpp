#include <doctest.h>

#include "fixtures.hpp"
#include "polariton/dressed.hpp"
#include "polariton/polariton_map.hpp"

using namespace polariton;

TEST_CASE("transformation matrices are unitary")
{
    for (const SystemParams& p : {fixtures::stark_set(), fixtures::generic_set()}) {
        for (int n = 1; n <= 5; ++n) {
            const Eigen::MatrixXcd m = transformation_matrix(p, n).matrix;
            CHECK((m.adjoint() * m - Eigen::MatrixXcd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("annihilation components add up to a")
{
    const BareBasis b(6);
    OperatorMatrix sum = OperatorMatrix::Zero(b.dim(), b.dim());
    for (int n = 1; n <= b.n_trunc() + 1; ++n) {
        sum += annihilation_component(b, n);
    }
    CHECK((sum - build_annihilation(b)).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(annihilation_component(b, 0), std::invalid_argument);
}

TEST_CASE("first-manifold couplings and rates")
{
    const SystemParams p = fixtures::stark_set(0.125);
    const CouplingTable t = rabi_table(p, 1);
    // Omega_0^(1,0) = ep / sqrt(1 + (g1/wc)^2)
    const ManifoldSpectrum first = first_manifold(p);
    const auto res = static_cast<Eigen::Index>(first.position_of(0));
    CHECK(std::abs(t.omega(0, res)) == doctest::Approx(0.125 / std::sqrt(10.0)).epsilon(1e-13));
    CHECK(std::abs(t.omega(0, res)) == doctest::Approx(0.03953).epsilon(1e-4));
    CHECK(t.max_bracket_deviation < 1e-10);
    CHECK(t.max_closed_form_deviation < 1e-12);

    const DampingMatrix d = damping_matrix(p, 1);
    // Gamma_0^(1) = kappa / (1 + 9)
    CHECK(d.gamma(res, res).real() == doctest::Approx(0.1).epsilon(1e-13));
    CHECK(d.max_bracket_deviation < 1e-10);
    CHECK(d.max_closed_form_deviation < 1e-12);
    CHECK((d.gamma - d.gamma.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("bracket cross-checks on higher manifolds")
{
    for (const SystemParams& p : {fixtures::mollow_set(), fixtures::generic_set()}) {
        for (int n = 1; n <= 5; ++n) {
            CHECK(rabi_table(p, n).max_bracket_deviation < 1e-10);
            const DampingMatrix d = damping_matrix(p, n);
            CHECK(d.max_bracket_deviation < 1e-10);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(d.gamma);
            CHECK(eig.eigenvalues().minCoeff() > -1e-12);
            for (int j = 0; j < d.gamma.rows(); ++j) {
                for (int k = 0; k < d.gamma.cols(); ++k) {
                    CHECK(std::abs(cos_theta(d, j, k)) <= 1.0 + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("off-diagonal damping is a small correction")
{
    // decay rates of the first-manifold block eps - i Gamma, with and
    // without the off-diagonal Gamma_jk
    const SystemParams p = fixtures::stark_set();
    const DampingMatrix d = damping_matrix(p, 1);
    const ManifoldSpectrum m = first_manifold(p);
    Eigen::MatrixXcd block = -I * d.gamma;
    for (int j = 0; j < 3; ++j) {
        block(j, j) += m.states[static_cast<std::size_t>(j)].epsilon;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(block);
    for (int j = 0; j < 3; ++j) {
        // eigenvalues pair up with the states by energy
        Eigen::Index k = 0;
        (eig.eigenvalues().real().array() - m.states[static_cast<std::size_t>(j)].epsilon).abs().minCoeff(&k);
        const double full = -eig.eigenvalues()[k].imag();
        CHECK(std::abs(full - d.gamma(j, j).real()) < 0.01 * d.gamma(j, j).real());
    }
    // numpy oracle for the same block
    CHECK(d.gamma(0, 0).real() == doctest::Approx(0.55));
    CHECK(std::abs(d.gamma(0, 2)) == doctest::Approx(0.35));
}

TEST_CASE("polariton generator reproduces Heff on the covered sector")
{
    for (const SystemParams& base : {fixtures::stark_set(0.3, 6), fixtures::generic_set(6)}) {
        const BareBasis b(6);
        const int top = b.top_complete_manifold();
        const PolaritonGenerator g = assemble_polariton_generator(base, b, top);
        const OperatorMatrix proj = manifold_projector(b, top);
        CHECK((g.total() - proj * build_Heff(base, b) * proj).cwiseAbs().maxCoeff() < 1e-10);

        // without the off-diagonal rates only the damping part changes
        const PolaritonGenerator diag = assemble_polariton_generator(base, b, top, false);
        CHECK((diag.h0 + diag.hd - g.h0 - g.hd).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("commutator identities")
{
    for (const SystemParams& p : {fixtures::stark_set(0.0, 8), fixtures::generic_set(8)}) {
        const CommutatorReport r = commutator_check(p, BareBasis(8));
        CHECK(r.resonant_deviation < 1e-12);
        CHECK(r.off_resonant_deviation < 1e-12);
        CHECK(r.ground_expectation == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.passed);
    }
    // the variant with +e^2 D21 and no s23/s32 terms is not an identity
    CHECK(commutator_check(fixtures::generic_set(8), BareBasis(8)).off_resonant_printed_deviation > 1e-3);
}

TEST_CASE("polariton operators")
{
    const SystemParams p = fixtures::generic_set(6);
    const BareBasis b(6);
    const PolaritonOperator op = polariton_operator(p, b, 1, 0, 0);
    REQUIRE(op.first_manifold_form.has_value());
    CHECK(op.first_manifold_form_deviation < 1e-12);
    const OperatorMatrix built = first_manifold_polariton(b, *op.first_manifold_form);
    // agrees with |e0><e_0^(1)| on the ground <-> first manifold sector
    const OperatorMatrix proj = manifold_projector(b, 1);
    CHECK((proj * built * proj - op.matrix).cwiseAbs().maxCoeff() < 1e-12);

    const OperatorMatrix s = polariton_collapse_operator(p, b, 1, 0, 0);
    const double rate = damping_matrix(p, 1).gamma(1, 1).real();
    CHECK((s - std::sqrt(rate) * op.matrix).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(polariton_operator(p, b, 1, 0, 7), std::invalid_argument);
    CHECK_THROWS_AS(polariton_operator(p, b, 6, 1, 1), std::invalid_argument);
}
