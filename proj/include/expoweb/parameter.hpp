#pragma once

#include <cmath>
#include <complex>

namespace expoweb {

using cplx = std::complex<double>;

// The map under study: z -> e^z + a, for a fixed complex offset a.
struct Parameter {
    cplx a;
    double abs_a;

    explicit Parameter(cplx a_) : a(a_), abs_a(std::abs(a_)) {}

    cplx apply(cplx z) const { return std::exp(z) + a; }
};

} // namespace expoweb
