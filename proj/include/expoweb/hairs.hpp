#pragma once

#include <vector>

#include "expoweb/orbit.hpp"
#include "expoweb/parameter.hpp"

namespace expoweb {

// Bounded integer itinerary with a designated repeating tail: entry(k)
// cycles through entries[tail_start..] once k passes the explicit prefix.
struct ExternalAddress {
    std::vector<int> entries;
    size_t tail_start = 0;
    int address_bound = 64;

    int entry(size_t k) const {
        if (k < entries.size()) return entries[k];
        const size_t cycle = entries.size() - tail_start;
        return entries[tail_start + (k - tail_start) % cycle];
    }
    bool valid() const;
};

struct HairPolyline {
    ExternalAddress address;
    std::vector<double> ts;      // potential parameter, descending
    std::vector<cplx> points;    // pullback images of the seeds
    cplx endpoint_estimate{0.0, 0.0};
    double endpoint_gap = 0.0;   // |endpoint(depth) - endpoint(depth-1)|
    int pullback_depth = 0;
};

// Traces the hair with the given address for real a < -1 by inverse-branch
// pullback: seeds t + 2*pi*i*entry(depth) for t in (0, t_max] are pushed
// through the branch chain L_k(w) = Log(w - a) + 2*pi*i*entry(k) for
// k = depth-1 .. 0.  Throws on branch-cut collision (w - a touching the
// negative real axis).
HairPolyline trace_hair(const ExternalAddress& addr, const Parameter& p,
                        int pullback_depth, double t_max, int n_points = 200);

// classify_point applied to the endpoint estimate; a meandering_candidate
// label marks a non-escaping endpoint.
PointClass classify_endpoint(const HairPolyline& h, const Parameter& p,
                             const GrowthConstants& cfg, int depth);

} // namespace expoweb
