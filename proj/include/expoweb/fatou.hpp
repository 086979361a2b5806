#pragma once

#include "expoweb/parameter.hpp"
#include "expoweb/tower.hpp"

namespace expoweb {

// z + 1 + e^{-z}.
inline cplx eval_fatou(cplx z) { return z + 1.0 + std::exp(-z); }

// e^{-1} * zeta * e^{-zeta}.
inline cplx eval_h(cplx zeta) { return std::exp(-1.0) * zeta * std::exp(-zeta); }

// (w + 1) e^w - 1.
inline cplx eval_h_tilde(cplx w) { return (w + 1.0) * std::exp(w) - 1.0; }

// |g(f(z)) - h(g(z))| with g(z) = e^{-z}: analytically zero, returns the
// float residual.
inline double semiconjugacy_residual(cplx z) {
    const cplx g_of_f = std::exp(-eval_fatou(z));
    const cplx h_of_g = eval_h(std::exp(-z));
    return std::abs(g_of_f - h_of_g);
}

// |h~(-zeta-1) - (-h(zeta)-1)|: analytically zero under w = -zeta - 1.
inline double conjugacy_residual(cplx zeta) {
    return std::abs(eval_h_tilde(-zeta - 1.0) - (-eval_h(zeta) - 1.0));
}

struct FatouOrbitConfig {
    double T = 1.0;
    int n0_max = 8;
    int depth = 4;
};

struct FatouVerdict {
    bool verified = false;
    int n0 = -1;
    int depth = 0;
};

// Searches for a shift n0 <= n0_max with |f^{n0+k}(z)| >= F^k(T) for all
// k <= depth (conservative tower comparison; non-finite iterates fail the
// remaining checks rather than pass them).
FatouVerdict fatou_A_membership(cplx z, const FatouOrbitConfig& cfg);

} // namespace expoweb
