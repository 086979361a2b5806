#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "expoweb/parameter.hpp"
#include "expoweb/tower.hpp"

namespace expoweb {

// Derived constants used across the verification pipeline.
struct GrowthConstants {
    double K = 1.0;          // sandwich slack, >= 1
    double mu = 0.0;         // side-condition bound parameter, >= 0
    double K_growth = 0.0;   // = max(2 + ln(5+|a|), mu + 2)
    double R = 0.0;          // membership threshold radius
    double half_plane_c = 0.0; // c with eps = e^{-c}
};

// K(mu, a) = max(2 + ln(5 + |a|), mu + 2).
double continued_growth_K(double mu, const Parameter& p);

GrowthConstants make_growth_constants(const Parameter& p, double K, double mu,
                                      double R, double half_plane_c);

// Max over |z| = r of |e^z + a|, to relative tolerance 1e-10.
// Requires e^r representable; returns nullopt (overflow signal) otherwise.
std::optional<double> max_modulus(double r, const Parameter& p);

// M^n(R, f_a) as a conservative bracket: exact point while each successive
// radius keeps e^r representable, then advanced one F-step at a time via
// [F(m-1)+K, F(m+1)-K].  Throws std::invalid_argument when R is below
// max(3, ln(1 + 2(|a| + K))).
TowerInterval max_modulus_iter(double R, const Parameter& p, int n, double K = 1.0);

// Log-domain conservative upper bounds for M^k(R, f_a), k = 0..depth.
// Entries become +inf once even the log is unrepresentable; comparisons
// against +inf fail, which is the conservative direction for membership.
std::vector<double> log_M_upper(double R, const Parameter& p, int depth,
                                double K = 1.0);

struct RZeroSample {
    double R;
    double M;      // M(R, f_a)
    double margin; // M - R
    bool holds;    // M > R
};

struct RZeroReport {
    std::vector<RZeroSample> samples;
    bool all_hold;
};

// Confirms M(R, f_a) > R for each sample radius (the threshold radius for
// the fast-escaping core is zero for this family).
RZeroReport verify_R_zero(const Parameter& p, const std::vector<double>& R_samples);

// F(Re z - 1) + K <= |e^z + a| <= F(Re z + 1) - K, required whenever
// Re z >= ln(1 + 2(|a| + K)).  Comparison is done in a form that stays
// valid when e^{Re z} overflows doubles.  Throws on precondition violation.
bool growth_sandwich_holds(cplx z, double K, const Parameter& p,
                           double rel_tol = 1e-12);

// Certified lower bound |f_a^n(z)| >= F^n(Re z - 2) for the continued-growth
// regime: requires Re z >= K(mu, a) and, for every k < n,
// max(-Re f^k(z), |Im f^k(z)|) <= F^k(mu) on the supplied orbit prefix.
struct ContinuedGrowthResult {
    bool certified;
    int n;                    // number of steps the bound covers
    TowerValue bound;         // F^n(Re z - 2), valid when certified
    int reject_index = -1;    // first k violating the side conditions
};

ContinuedGrowthResult continued_growth_bound(cplx z, double mu, const Parameter& p,
                                             const std::vector<cplx>& orbit_prefix);

} // namespace expoweb
