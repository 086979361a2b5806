#include "expoweb/fatou.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace expoweb {

FatouVerdict fatou_A_membership(cplx z, const FatouOrbitConfig& cfg) {
    if (!(cfg.T > 0.0) || cfg.depth < 1 || cfg.n0_max < 0)
        throw std::invalid_argument("fatou_A_membership: invalid config");

    // Orbit prefix up to n0_max + depth, stopping at the first non-finite
    // iterate (beyond it nothing sound can be claimed).
    std::vector<cplx> orbit{z};
    for (int i = 0; i < cfg.n0_max + cfg.depth; ++i) {
        const cplx w = eval_fatou(orbit.back());
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) break;
        orbit.push_back(w);
    }

    std::vector<TowerValue> thresh;
    thresh.reserve(static_cast<size_t>(cfg.depth) + 1);
    for (int k = 0; k <= cfg.depth; ++k) thresh.push_back(iterate_F(cfg.T, k));

    FatouVerdict v;
    v.depth = cfg.depth;
    for (int n0 = 0; n0 <= cfg.n0_max; ++n0) {
        bool ok = true;
        for (int k = 0; k <= cfg.depth; ++k) {
            const size_t idx = static_cast<size_t>(n0 + k);
            if (idx >= orbit.size()) {
                ok = false; // iterate not computable: conservative failure
                break;
            }
            if (TowerValue::from_value(std::abs(orbit[idx])) <
                thresh[static_cast<size_t>(k)]) {
                ok = false;
                break;
            }
        }
        if (ok) {
            v.verified = true;
            v.n0 = n0;
            return v;
        }
    }
    return v;
}

} // namespace expoweb
