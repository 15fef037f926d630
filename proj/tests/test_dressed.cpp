#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "polariton/dressed.hpp"

using namespace polariton;

namespace {

std::vector<double> energies(const ManifoldSpectrum& m)
{
    std::vector<double> e;
    for (const auto& s : m.states) {
        e.push_back(s.epsilon);
    }
    return e;
}

} // namespace

TEST_CASE("first manifold at the Stark parameters")
{
    const ManifoldSpectrum m = first_manifold(fixtures::stark_set());
    REQUIRE(m.states.size() == 3);
    CHECK(m.path == SpectrumPath::closed_form);
    CHECK(m.states[0].label == -1);
    CHECK(m.states[1].label == 0);
    CHECK(m.states[2].label == 1);
    CHECK(m.states[0].epsilon == doctest::Approx(-6.324555320336760).epsilon(1e-13));
    CHECK(m.states[1].epsilon == doctest::Approx(0.0));
    CHECK(m.states[2].epsilon == doctest::Approx(6.324555320336762).epsilon(1e-13));
    // the resonant state has no |0,2> part
    CHECK(std::abs(m.states[1].beta()) < 1e-15);
}

TEST_CASE("higher manifolds against frozen diagonalizations")
{
    // numpy eigvalsh of the manifold blocks
    const SystemParams mollow = fixtures::mollow_set();
    const std::vector<std::vector<double>> mollow_ref{
        {-8.902891532337684, -5.670021149718622, 5.762893625794165, 8.910019056262142},
        {-10.86752123029105, -8.065863980447677, 8.153984957356359, 10.879400253382368},
        {-12.51622920224263, -9.91533582505323, 10.0, 12.53156502729586},
    };
    const SystemParams generic = fixtures::generic_set();
    const std::vector<std::vector<double>> generic_ref{
        {-2.761419265213549, -1.033560825653436, 0.186690818678299, 3.108289272188688},
        {-3.082561307404497, -1.215274865646774, 0.389093098596315, 3.408743074454955},
        {-3.361667837492127, -1.393743720377212, 0.576512040413252, 3.678899517456087},
    };
    for (int n = 2; n <= 4; ++n) {
        const ManifoldSpectrum a = manifold_n(mollow, n);
        const ManifoldSpectrum b = manifold_n(generic, n);
        CHECK(a.path == SpectrumPath::closed_form);
        CHECK(b.path == SpectrumPath::closed_form);
        for (int k = 0; k < 4; ++k) {
            CHECK(a.states[static_cast<std::size_t>(k)].label == k + 1);
            CHECK(a.states[static_cast<std::size_t>(k)].epsilon ==
                  doctest::Approx(mollow_ref[static_cast<std::size_t>(n - 2)][static_cast<std::size_t>(k)])
                      .epsilon(1e-12));
            CHECK(b.states[static_cast<std::size_t>(k)].epsilon ==
                  doctest::Approx(generic_ref[static_cast<std::size_t>(n - 2)][static_cast<std::size_t>(k)])
                      .epsilon(1e-12));
        }
    }
    const auto e1 = energies(first_manifold(generic));
    CHECK(e1[0] == doctest::Approx(-2.363201123595259).epsilon(1e-13));
    CHECK(e1[2] == doctest::Approx(2.763201123595259).epsilon(1e-13));
}

TEST_CASE("closed form vs numeric on random draws")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> pos(0.1, 8.0);
    std::uniform_real_distribution<double> det(-3.0, 3.0);
    for (int draw = 0; draw < 200; ++draw) {
        SystemParams p;
        p.g1 = pos(rng);
        p.g2 = pos(rng);
        p.omega_c = pos(rng);
        p.delta = det(rng);
        p.big_delta = det(rng);
        for (int n = 1; n <= 5; ++n) {
            const ManifoldSpectrum a = dressed_manifold(p, n);
            const ManifoldSpectrum b = numeric_manifold(p, n);
            const int size = manifold_size(n);
            double total = 0.0;
            for (std::size_t k = 0; k < a.states.size(); ++k) {
                CHECK(a.states[k].epsilon == doctest::Approx(b.states[k].epsilon).epsilon(1e-9).scale(1.0));
                const cplx ov = a.states[k].coeffs.head(size).dot(b.states[k].coeffs.head(size));
                CHECK(std::abs(ov) > 1.0 - 1e-8);
                total += a.states[k].epsilon;
            }
            CHECK(total == doctest::Approx(n == 1 ? p.delta : p.delta + p.big_delta).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("sizes, ground state and embedding")
{
    CHECK(manifold_size(0) == 1);
    CHECK(manifold_size(1) == 3);
    CHECK(manifold_size(2) == 4);
    const ManifoldSpectrum g = ground_manifold();
    REQUIRE(g.states.size() == 1);
    CHECK(g.states[0].epsilon == 0.0);

    const SystemParams p = fixtures::generic_set(6);
    const BareBasis basis(6);
    const ManifoldSpectrum m = dressed_manifold(p, 3);
    const StateVector v = embed(basis, m.states[2]);
    CHECK(v.norm() == doctest::Approx(1.0));
    // an eigenvector of H0 with its energy
    CHECK((build_H0(p, basis) * v - m.states[2].epsilon * v).norm() < 1e-10);
    CHECK_THROWS_AS(embed(BareBasis(3), dressed_manifold(p, 5).states[0]), std::invalid_argument);
}

TEST_CASE("degenerate parameters fall back to the numeric path")
{
    SystemParams p = fixtures::stark_set();
    p.g2 = 0.0;
    const ManifoldSpectrum m = dressed_manifold(p, 2);
    CHECK(m.path == SpectrumPath::numeric);
    const ManifoldSpectrum ref = numeric_manifold(p, 2);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(m.states[k].epsilon == doctest::Approx(ref.states[k].epsilon));
    }

    p = fixtures::stark_set();
    p.omega_c = 0.0;
    const ManifoldSpectrum f = first_manifold(p);
    CHECK(f.path == SpectrumPath::numeric);
    CHECK(f.states[0].epsilon == doctest::Approx(-6.0));
}

TEST_CASE("quartic roots are real for Hermitian blocks")
{
    const QuarticRoots q = manifold_quartic_roots(fixtures::generic_set(), 3);
    for (const cplx r : q.roots) {
        CHECK(std::abs(r.imag()) < 1e-9 * q.scale);
    }
}
