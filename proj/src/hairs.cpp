#include "expoweb/hairs.hpp"

#include <cmath>
#include <stdexcept>

namespace expoweb {

bool ExternalAddress::valid() const {
    if (entries.empty() || tail_start >= entries.size()) return false;
    for (int e : entries)
        if (std::abs(e) > address_bound) return false;
    return true;
}

namespace {

// Apply the branch chain for levels depth-1 .. 0 to a seed at level `depth`.
cplx pull_seed(cplx w, const ExternalAddress& addr, const Parameter& p, int depth) {
    for (int k = depth - 1; k >= 0; --k) {
        const cplx u = w - p.a;
        if (u.real() <= 0.0 && std::abs(u.imag()) < 1e-12)
            throw std::runtime_error("trace_hair: branch-cut collision");
        w = std::log(u) + cplx(0.0, 2.0 * M_PI * addr.entry(static_cast<size_t>(k)));
    }
    return w;
}

} // namespace

HairPolyline trace_hair(const ExternalAddress& addr, const Parameter& p,
                        int pullback_depth, double t_max, int n_points) {
    if (!addr.valid()) throw std::invalid_argument("trace_hair: invalid address");
    if (!(p.a.imag() == 0.0 && p.a.real() < -1.0))
        throw std::invalid_argument("trace_hair: requires real a < -1");
    if (pullback_depth < 1 || n_points < 2 || !(t_max > 0.0))
        throw std::invalid_argument("trace_hair: bad arguments");

    HairPolyline h;
    h.address = addr;
    h.pullback_depth = pullback_depth;
    const double t_min = 1e-3;
    const double seed_im =
        2.0 * M_PI * addr.entry(static_cast<size_t>(pullback_depth));
    for (int i = 0; i < n_points; ++i) {
        // Descending from t_max to t_min, geometrically spaced.
        const double t =
            t_max * std::pow(t_min / t_max, double(i) / (n_points - 1));
        h.ts.push_back(t);
        h.points.push_back(pull_seed(cplx(t, seed_im), addr, p, pullback_depth));
    }
    h.endpoint_estimate = h.points.back();
    const double seed_im_prev =
        2.0 * M_PI * addr.entry(static_cast<size_t>(pullback_depth - 1));
    const cplx prev_endpoint =
        pull_seed(cplx(t_min, seed_im_prev), addr, p, pullback_depth - 1);
    h.endpoint_gap = std::abs(h.endpoint_estimate - prev_endpoint);
    return h;
}

PointClass classify_endpoint(const HairPolyline& h, const Parameter& p,
                             const GrowthConstants& cfg, int depth) {
    const Cycle cycle = find_cycle(p);
    ClassifyOptions opt;
    opt.depth = depth;
    return classify_point(h.endpoint_estimate, p, cfg, cycle, opt);
}

} // namespace expoweb
