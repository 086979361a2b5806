#pragma once

#include <optional>
#include <string>
#include <vector>

#include "expoweb/growth.hpp"
#include "expoweb/orbit.hpp"
#include "expoweb/parameter.hpp"

namespace expoweb {

// Arc from the boundary of D(a, eps) to far right, lying in the attracting
// basin (verified per vertex: basin classification, or a certified escape for
// the far tail where the orbit overflows immediately).
struct AccessArc {
    std::vector<cplx> vertices;
    size_t realpart_monotone_from = 0;
};

// The pullback trap: the half-plane {Re z <= -c} together with the 2*pi*i*Z
// translates of one preimage component of the access arc.
struct TrapSet {
    cplx a;
    double c = 0.0;            // half-plane boundary; eps = e^{-c}
    std::vector<cplx> base_arc;
    double base_im_min = 0.0;
    double base_im_max = 0.0;
    double delta = 0.0;        // strip spread, >= 2*pi

    // Is z in the trap (within tol of an arc translate, or in the half-plane)?
    bool membership(cplx z, double tol = 1e-9) const;
};

// Euclidean distance from z to a polyline.
double dist_to_polyline(cplx z, const std::vector<cplx>& poly);

// Pull a polyline back through one inverse branch of z -> e^z + a by
// logarithm continuity: path[0] must map from seed_img (e^{seed_img} + a =
// path[0] up to branch choice); the imaginary part is unwrapped along the
// path.  Segments whose pullback jumps by more than pi/2 are refined by
// bisection of the forward path.
std::vector<cplx> pull_polyline(const std::vector<cplx>& path, cplx seed_img,
                                const Parameter& p);

struct ArcVertexCheck {
    size_t index;
    bool basin;
    bool escape_certified;
};

// Builds the access arc.  Real a < -1: the straight ray [a+eps, cap] on the
// real axis.  Otherwise: a segment of the negative real axis (plus a
// connector from the most-left cycle point) pulled back period-1 times
// through branch-continuous logarithms, extended by the analytic tail and
// trimmed to start on the circle |z - a| = eps.  Throws std::runtime_error
// when a sampled vertex is neither basin-classified nor escape-certified.
AccessArc build_access_arc(const Parameter& p, const Cycle& cycle, double eps,
                           double sigma_re_cap = 30.0);

// Trap from the access arc: base arc = one component of the preimage of the
// arc under z -> e^z + a, with spread delta = 2*pi + its Im oscillation.
TrapSet build_trap(const Parameter& p, double eps, const AccessArc& sigma);

double strip_delta(const TrapSet& trap);

// R = max(|z0|, c, 3, ln(1 + 2(|a| + delta))) + 1.
double choose_R(cplx z0, const TrapSet& trap, const Parameter& p);

struct XEvidence {
    bool verified = false;
    int first_trap_index = -1;      // j with f^j(z) in the trap, -1 if threshold-only
    int fail_index = -1;            // first k where neither branch held
    std::vector<int> threshold_indices; // k verified via |f^k| >= M^k
    std::string reason;
};

// Depth-truncated membership in
//   X = intersection over k of ( {|f^k| >= M^k(R)} union {f^j in trap, j<k} ),
// with the k=0 term implemented literally as |z| >= R.
XEvidence x_membership(cplx z, const TrapSet& trap, double R, const Parameter& p,
                       int depth);

struct Rectangle {
    double re_min;
    double re_max;
    double im_abs_max;
    double margin;
};

// Enclosing rectangle {Re in [-c-m, max(R+3, K(R+1)) + m], |Im| <= R+delta+m}.
Rectangle bounding_rectangle(cplx z0, double R, const TrapSet& trap,
                             const Parameter& p, double margin = 1.0);

struct BoundarySample {
    cplx z;
    XEvidence evidence;
};

struct SeparationCertificate {
    cplx z0;
    cplx a;
    double eps = 0.0;
    double R = 0.0;
    int depth = 0;
    Rectangle rectangle{};            // the reported enclosure
    double boundary_re_min = 0.0;     // left edge of the sampled curve, -(R+m)
    double boundary_re_max = 0.0;     // right edge x_R
    double boundary_im_top = 0.0;
    double boundary_im_bot = 0.0;
    int k_top = 0;
    int k_bot = 0;
    std::vector<BoundarySample> samples; // left, top, bottom, right in order
    double spacing = 0.0;             // mean gap between consecutive samples
    bool all_verified = false;
    std::vector<size_t> violations;   // indices of failed samples
};

// Full pipeline: access arc -> trap -> delta -> R -> boundary, then
// per-sample membership verification.  The sampled boundary is a closed
// curve snapped to the trap: left edge inside the half-plane at
// Re = -(R+margin), top/bottom edges along arc translates that clear
// |Im| = R+delta+margin, right edge at x_R = max(R+3, K(R+1)) + margin +
// slack.  Throws on pipeline failure; sample violations are recorded in the
// returned certificate (all_verified = false).
SeparationCertificate separation_certificate(cplx z0, const Parameter& p,
                                             double eps, int depth,
                                             int samples_per_side);

struct JuliaTrapResult {
    bool found = false;
    int n = -1;                // minimal escape index into the half-plane
    cplx zeta{0.0, 0.0};       // witness point in D(a, eps)
    std::vector<cplx> sigma0;  // arc inside the half-plane avoiding the singular orbit
    std::optional<TrapSet> trap;
    std::string note;
};

// Variant that needs no Fatou cycle: grid-search D(a, eps) for a point whose
// orbit enters the half-plane {Re <= -c}, build an arc there avoiding the
// singular orbit's prefix, and pull it back along the witness orbit.
JuliaTrapResult trap_from_julia(const Parameter& p, double eps, double c,
                                int max_n, int grid);

} // namespace expoweb
