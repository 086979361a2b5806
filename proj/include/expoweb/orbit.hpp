#pragma once

#include <string>
#include <vector>

#include "expoweb/growth.hpp"
#include "expoweb/parameter.hpp"
#include "expoweb/tower.hpp"

namespace expoweb {

enum class OrbitEnd { depth_exhausted, overflow, basin_converged, trap_entered };

struct Orbit {
    cplx start;
    std::vector<cplx> points; // f^k(start), k = 0..m
    OrbitEnd terminated_by;
};

// Forward orbit up to n steps, stopping when |point| exceeds the bailout.
Orbit iterate_map(cplx z, const Parameter& p, int n, double bailout);

enum class CycleKind { attracting, parabolic_suspect, none };

struct Cycle {
    int period = 0;
    std::vector<cplx> points;
    cplx multiplier{0.0, 0.0};
    CycleKind kind = CycleKind::none;
};

// Follows the orbit of the singular value a, detects convergence to a cycle
// by windowed recurrence, refines cycle points by Newton's method on
// f^p(z) - z, and classifies the cycle by its multiplier.
Cycle find_cycle(const Parameter& p, int max_iter = 3000, double tol = 1e-9);

enum class PointLabel {
    basin,
    fast_core_verified,   // |f^n(z)| >= M^n(R) held conservatively for n <= depth
    escaping_numerical,
    meandering_candidate,
    undecided
};

struct PointClass {
    PointLabel label = PointLabel::undecided;
    int depth_used = 0;
    int basin_hit_iter = -1;  // iteration at which the orbit entered the cycle ball
    int fail_index = -1;      // first n where the threshold inequality failed
    std::string note;
};

struct ClassifyOptions {
    int depth = 3;
    int basin_iters = 400;
    double basin_tol = 1e-8;
    double bailout = 1e300;
};

// Depth-bounded classification: basin if the orbit enters a tol-ball around
// the attracting cycle (basin wins ties); fast_core_verified if
// |f^n(z)| >= M^n(R) held conservatively for all n <= depth;
// escaping_numerical on overflow without full verification;
// meandering_candidate when the orbit stays bounded below the thresholds.
PointClass classify_point(cplx z, const Parameter& p, const GrowthConstants& cfg,
                          const Cycle& cycle, const ClassifyOptions& opt);

// Same, with the thresholds log M^n(R) (n = 0..opt.depth) precomputed by
// log_M_upper — avoids recomputing them per pixel in raster sweeps.
PointClass classify_point(cplx z, const Parameter& p,
                          const std::vector<double>& log_thresholds,
                          const Cycle& cycle, const ClassifyOptions& opt);

struct EscapeShiftResult {
    bool certified = false;
    int m = -1;               // index of the iterate anchoring the bound
    double anchor_re = 0.0;   // Re f^m(z)
    int verified_steps = 0;   // side conditions checked for k <= this
    TowerValue bound;         // F^{verified_steps}(anchor_re - 2)
    int reject_index = -1;
    std::string reason;
};

// Escape certificate: if some computed iterate w_m has
// Re w_m >= max(R+3, K(R+1,a)) and the continued-growth side conditions hold
// on the subsequent computable iterates up to `depth`, the orbit magnitude is
// bounded below by F^k(Re w_m - 2) >= M^k(R) for the verified range.
EscapeShiftResult certified_escape_shift(cplx z, const Parameter& p, double R,
                                         int depth);

// ---------------------------------------------------------------------------
// Extended orbit representation: one conservative step past double overflow.
//
//   fin:   w is the iterate itself.
//   expf:  the iterate equals e^w + a with Re w > overflow_re (not
//          representable); w is finite.
//   magre: only a huge positive lower bound on the real part is known,
//          as log_re = log(Re iterate); direction information is gone.
//   lost:  nothing sound is known (conservative failure state).
// ---------------------------------------------------------------------------
enum class ExtKind { fin, expf, magre, lost };

struct ExtIterate {
    ExtKind kind = ExtKind::fin;
    cplx w{0.0, 0.0};  // fin: value; expf: exponent
    double log_re = 0.0; // magre only

    static constexpr double overflow_re = 709.0;

    // Advance by one application of z -> e^z + a.  magre/lost degrade to lost.
    ExtIterate step(const Parameter& p) const;

    // Conservative test  |iterate| >= e^{log_threshold}.
    bool modulus_at_least(double log_threshold, double abs_a) const;

    // Conservative test  Re iterate <= -c  (the half-plane trap).
    bool real_part_at_most(double neg_c, double abs_a) const;
};

} // namespace expoweb
