// parameter sets shared by the tests
#pragma once

#include "polariton/model.hpp"

namespace fixtures {

// g_j = 6, gamma_j = 0.1, omega_c = 2, kappa = 1
inline polariton::SystemParams stark_set(double ep = 0.0, int n_trunc = 15)
{
    polariton::SystemParams p;
    p.g1 = p.g2 = 6.0;
    p.omega_c = 2.0;
    p.gamma1 = p.gamma2 = p.gamma3 = 0.1;
    p.kappa = 1.0;
    p.ep = ep;
    p.n_trunc = n_trunc;
    return p;
}

// kappa = 0.25, gamma_j = 0.1, g_j = 6, omega_c = 2, delta = 0, Delta = 0.1
inline polariton::SystemParams mollow_set(double ep = 0.45, int n_trunc = 15)
{
    polariton::SystemParams p = stark_set(ep, n_trunc);
    p.big_delta = 0.1;
    p.kappa = 0.25;
    return p;
}

// nothing degenerate, everything distinct
inline polariton::SystemParams generic_set(int n_trunc = 8)
{
    polariton::SystemParams p;
    p.g1 = 1.3;
    p.g2 = 0.7;
    p.omega_c = 2.2;
    p.delta = 0.4;
    p.big_delta = -0.9;
    p.gamma1 = 0.05;
    p.gamma2 = 0.2;
    p.gamma3 = 0.13;
    p.kappa = 1.0;
    p.ep = 0.3;
    p.n_trunc = n_trunc;
    return p;
}

} // namespace fixtures
