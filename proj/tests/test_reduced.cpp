#include <doctest.h>

#include <cstring>

#include "fixtures.hpp"
#include "polariton/reduced.hpp"

using namespace polariton;

TEST_CASE("thresholds")
{
    // ep = (kappa/2) / sqrt(1 + (g1/wc)^2)
    CHECK(stark_eigenvalues(fixtures::stark_set()).threshold_ep ==
          doctest::Approx(0.5 / std::sqrt(10.0)).epsilon(1e-14));
    CHECK(stark_eigenvalues(fixtures::mollow_set()).threshold_ep ==
          doctest::Approx(0.125 / std::sqrt(10.0)).epsilon(1e-14));
}

TEST_CASE("reduced Hamiltonian eigenvalues")
{
    for (const double ep : {0.05, 0.158, 0.3}) {
        const SystemParams p = fixtures::stark_set(ep);
        const StarkResult r = stark_eigenvalues(p);
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> eig(reduced_hamiltonian(p));
        std::array<cplx, 2> num{eig.eigenvalues()[0], eig.eigenvalues()[1]};
        std::array<cplx, 2> ana{r.eigenvalue_plus(), r.eigenvalue_minus()};
        const auto key = [](cplx a, cplx b) { return a.real() + a.imag() < b.real() + b.imag(); };
        std::sort(num.begin(), num.end(), key);
        std::sort(ana.begin(), ana.end(), key);
        CHECK(std::abs(num[0] - ana[0]) < 1e-12);
        CHECK(std::abs(num[1] - ana[1]) < 1e-12);
    }
}

TEST_CASE("regimes")
{
    const SystemParams weak = fixtures::stark_set(0.1);
    const StarkResult w = stark_eigenvalues(weak);
    CHECK(w.regime == Regime::weak);
    CHECK(w.epsilon_plus == 0.0);
    // G/2 +- sqrt(G^2/4 - W^2)
    const double g0 = 0.1;
    const double w0 = 0.1 / std::sqrt(10.0);
    CHECK(w.gamma_plus + w.gamma_minus == doctest::Approx(g0));
    CHECK(std::max(w.gamma_plus, w.gamma_minus) ==
          doctest::Approx(g0 / 2 + std::sqrt(g0 * g0 / 4 - w0 * w0)).epsilon(1e-13));

    const StarkResult s = stark_eigenvalues(fixtures::stark_set(0.3));
    CHECK(s.regime == Regime::split);
    CHECK(s.gamma_plus == doctest::Approx(0.05));
    CHECK(s.gamma_minus == doctest::Approx(0.05));
    CHECK(s.epsilon_plus == doctest::Approx(std::sqrt(0.009 - 0.0025)).epsilon(1e-13));
    CHECK(s.epsilon_minus == doctest::Approx(-s.epsilon_plus));

    SystemParams c = fixtures::stark_set();
    c.ep = stark_eigenvalues(c).threshold_ep;
    CHECK(stark_eigenvalues(c).regime == Regime::critical);
    CHECK(to_string(Regime::split) == "split");

    SystemParams bad = fixtures::stark_set();
    bad.omega_c = 0.0;
    CHECK_THROWS_AS(stark_eigenvalues(bad), std::invalid_argument);
}

TEST_CASE("atomic decay rates do not enter")
{
    SystemParams a = fixtures::stark_set(0.3);
    SystemParams b = a;
    b.gamma1 = 3.7;
    b.gamma2 = 0.0;
    b.gamma3 = 12.0;
    const StarkResult ra = stark_eigenvalues(a);
    const StarkResult rb = stark_eigenvalues(b);
    CHECK(std::memcmp(&ra.epsilon_plus, &rb.epsilon_plus, sizeof(double)) == 0);
    CHECK(std::memcmp(&ra.gamma_minus, &rb.gamma_minus, sizeof(double)) == 0);
    CHECK(ra.threshold_ep == rb.threshold_ep);
}

TEST_CASE("Stark states")
{
    const SystemParams p = fixtures::stark_set(0.3, 4);
    const StarkStates s = stark_states(p, BareBasis(4));
    CHECK_FALSE(s.from_eigenvectors);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s.plus[0] - r) < 1e-15);
    CHECK(std::abs(s.plus[1] - cplx(0.0, -r)) < 1e-15);
    CHECK(std::abs(s.minus[1] - cplx(0.0, r)) < 1e-15);
    CHECK(s.bare_plus.norm() == doctest::Approx(1.0));
    CHECK(std::abs(s.bare_plus.dot(s.bare_minus)) < 1e-14);
}

TEST_CASE("Mollow predictions")
{
    const MollowPrediction m = mollow_predictions(fixtures::mollow_set(0.45));
    CHECK(m.has_sidebands);
    CHECK(m.center_linewidth == doctest::Approx(0.025));
    CHECK(m.sideband_linewidth == doctest::Approx(0.0375));
    CHECK(m.sideband_offset == doctest::Approx(0.2835).epsilon(2e-4));
    CHECK_FALSE(mollow_predictions(fixtures::mollow_set(0.02)).has_sidebands);
}

TEST_CASE("Stark sweep against full numerics")
{
    // full Heff eigenvalues at n_trunc 15 nearest the doublet (numpy eig)
    const std::vector<double> grid{0.0, 0.1, 0.2, 0.3, 0.5};
    SweepOptions opts;
    opts.convergence_check = false;
    const SweepTrace t = stark_sweep(fixtures::stark_set(), grid, opts);
    REQUIRE(t.samples.size() == grid.size());
    CHECK(std::abs(t.samples[0].numeric[0]) < 1e-12);
    CHECK(std::abs(t.samples[0].numeric[1].real()) < 1e-12);

    const auto near = [](const SweepSample& s, cplx ref) {
        return std::min(std::abs(s.numeric[0] - ref), std::abs(s.numeric[1] - ref));
    };
    CHECK(near(t.samples[2], {0.03854042308428135, -0.05004431594531743}) < 1e-9);
    CHECK(near(t.samples[3], {0.08030659179412034, -0.05024436578860859}) < 1e-9);
    CHECK(near(t.samples[4], {-0.1493442154686051, -0.05091512234607954}) < 1e-9);
    // stepping across the exceptional point near 0.158 leaves the branch
    // identity undecided; away from it continuation is clean
    CHECK(t.samples[2].ambiguous);
    for (const SweepSample& s : t.samples) {
        if (std::abs(s.ep - 0.158) > 0.05) {
            CHECK_FALSE(s.ambiguous);
        }
        const auto sorted = s.numeric_sorted();
        CHECK(sorted[0].real() <= sorted[1].real());
    }
    CHECK_THROWS_AS(stark_sweep(fixtures::stark_set(), {0.2, 0.1}, opts), std::invalid_argument);
}
