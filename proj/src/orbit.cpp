#include "expoweb/orbit.hpp"

#include <algorithm>
#include <cmath>

namespace expoweb {

Orbit iterate_map(cplx z, const Parameter& p, int n, double bailout) {
    if (n < 0) throw std::invalid_argument("iterate_map: n must be >= 0");
    if (!(bailout > 0.0)) throw std::invalid_argument("iterate_map: bailout must be > 0");
    Orbit o;
    o.start = z;
    o.points.push_back(z);
    o.terminated_by = OrbitEnd::depth_exhausted;
    cplx w = z;
    for (int k = 0; k < n; ++k) {
        if (std::abs(w) > bailout || w.real() > 709.0) {
            o.terminated_by = OrbitEnd::overflow;
            return o;
        }
        w = p.apply(w);
        o.points.push_back(w);
        if (std::abs(w) > bailout) {
            o.terminated_by = OrbitEnd::overflow;
            return o;
        }
    }
    return o;
}

namespace {

// Newton refinement of a period-p cycle point: root of f^p(z) - z.
cplx refine_cycle_point(cplx z, const Parameter& p, int period) {
    cplx w = z;
    for (int it = 0; it < 80; ++it) {
        cplx val = w, der = 1.0;
        for (int q = 0; q < period; ++q) {
            cplx e = std::exp(val);
            val = e + p.a;
            der *= e;
        }
        cplx g = val - w, gp = der - 1.0;
        if (std::abs(gp) < 1e-300) break;
        cplx step = g / gp;
        w -= step;
        if (std::abs(step) < 1e-14) break;
    }
    return w;
}

Cycle finish_cycle(cplx root, const Parameter& p, int period) {
    // Reduce to the minimal period.
    std::vector<cplx> pts{root};
    for (int q = 1; q < period; ++q) pts.push_back(p.apply(pts.back()));
    int minp = period;
    for (int d = 1; d < period; ++d) {
        if (period % d == 0 && std::abs(pts[static_cast<size_t>(d)] - pts[0]) < 1e-8) {
            minp = d;
            break;
        }
    }
    pts.resize(static_cast<size_t>(minp));

    Cycle c;
    c.period = minp;
    c.points = pts;
    c.multiplier = 1.0;
    for (cplx q : pts) c.multiplier *= std::exp(q);
    const double am = std::abs(c.multiplier);
    if (std::abs(am - 1.0) <= 1e-6)
        c.kind = CycleKind::parabolic_suspect;
    else if (am < 1.0)
        c.kind = CycleKind::attracting;
    else
        c.kind = CycleKind::none;
    return c;
}

} // namespace

Cycle find_cycle(const Parameter& p, int max_iter, double tol) {
    (void)tol;
    constexpr double detect_tol = 1e-7;
    constexpr int max_period = 12;
    std::vector<cplx> hist;
    hist.reserve(static_cast<size_t>(std::min(max_iter, 1 << 16)));
    cplx z = p.a;
    for (int i = 0; i < max_iter; ++i) {
        if (std::abs(z) > 1e10 || z.real() > 709.0) return Cycle{}; // singular orbit escapes
        z = p.apply(z);
        hist.push_back(z);
        if (hist.size() > 50) {
            const size_t m = hist.size() - 1;
            for (int period = 1; period <= max_period; ++period) {
                if (m < static_cast<size_t>(period)) break;
                if (std::abs(hist[m] - hist[m - static_cast<size_t>(period)]) < detect_tol) {
                    cplx root = refine_cycle_point(hist[m], p, period);
                    // Accept only if refinement stayed near the observed orbit.
                    if (std::abs(root - hist[m]) < 0.5)
                        return finish_cycle(root, p, period);
                }
            }
        }
    }
    return Cycle{};
}

// ---------------------------------------------------------------------------
// Extended iterates
// ---------------------------------------------------------------------------

ExtIterate ExtIterate::step(const Parameter& p) const {
    ExtIterate out;
    switch (kind) {
    case ExtKind::fin:
        if (w.real() <= overflow_re) {
            out.kind = ExtKind::fin;
            out.w = p.apply(w);
        } else {
            out.kind = ExtKind::expf;
            out.w = w;
        }
        return out;
    case ExtKind::expf: {
        // This iterate is e^w + a with Re w > 709.  Its real part is
        // e^{Re w} cos(Im w) + Re a; only a huge positive direction lets the
        // next iterate carry sound magnitude information.
        const double cv = std::cos(w.imag());
        if (cv > 0.0 && w.real() + std::log(cv) > std::log(p.abs_a + 10.0)) {
            out.kind = ExtKind::magre;
            // Next iterate = e^u + a with Re u >= e^{log_re} - |a|.
            out.log_re = w.real() + std::log(cv);
        } else {
            out.kind = ExtKind::lost;
        }
        return out;
    }
    default:
        out.kind = ExtKind::lost;
        return out;
    }
}

bool ExtIterate::modulus_at_least(double log_threshold, double abs_a) const {
    switch (kind) {
    case ExtKind::fin: {
        const double m = std::abs(w);
        return m > 0.0 && std::log(m) >= log_threshold;
    }
    case ExtKind::expf:
        // |e^w + a| >= e^{Re w} - |a| >= e^{Re w - 1} for Re w > 709.
        return w.real() - 1.0 >= log_threshold;
    case ExtKind::magre:
        // Value e^u + a with Re u >= e^{log_re} - |a|;
        // log|value| >= Re u - 1, so it suffices that
        // e^{log_re} >= log_threshold + |a| + 2.
        return std::isfinite(log_threshold) &&
               log_re >= std::log(std::max(log_threshold, 1.0) + abs_a + 2.0);
    default:
        return false;
    }
}

bool ExtIterate::real_part_at_most(double neg_c, double abs_a) const {
    const double c = -neg_c;
    switch (kind) {
    case ExtKind::fin:
        return w.real() <= neg_c;
    case ExtKind::expf: {
        // Re(e^w + a) = e^{Re w} cos(Im w) + Re a with Re w > 709: certainly
        // in the half-plane when the cosine is negative with any margin.
        const double cv = std::cos(w.imag());
        return cv < 0.0 &&
               w.real() + std::log(-cv) > std::log(std::max(c, 0.0) + abs_a + 1.0);
    }
    default:
        return false; // magre: direction unknown; lost: nothing known
    }
}

// ---------------------------------------------------------------------------
// classify_point
// ---------------------------------------------------------------------------

PointClass classify_point(cplx z, const Parameter& p, const GrowthConstants& cfg,
                          const Cycle& cycle, const ClassifyOptions& opt) {
    return classify_point(z, p, log_M_upper(cfg.R, p, opt.depth, cfg.K), cycle, opt);
}

PointClass classify_point(cplx z, const Parameter& p,
                          const std::vector<double>& log_thresholds,
                          const Cycle& cycle, const ClassifyOptions& opt) {
    if (opt.depth < 1) throw std::invalid_argument("classify_point: depth must be >= 1");
    if (log_thresholds.size() < static_cast<size_t>(opt.depth) + 1)
        throw std::invalid_argument("classify_point: thresholds shorter than depth");
    PointClass pc;
    pc.depth_used = opt.depth;

    // Threshold verification |f^n(z)| >= M^n(R) for n <= depth, using the
    // conservative extended representation past double overflow.
    const std::vector<double>& logM = log_thresholds;
    bool core_ok = true;
    bool overflowed = false;
    int fail_index = -1;
    ExtIterate cur;
    cur.kind = ExtKind::fin;
    cur.w = z;
    for (int n = 0; n <= opt.depth; ++n) {
        if (n > 0) cur = cur.step(p);
        if (cur.kind != ExtKind::fin) overflowed = true;
        if (cur.kind == ExtKind::fin && std::abs(cur.w) > opt.bailout) overflowed = true;
        if (core_ok && !cur.modulus_at_least(logM[static_cast<size_t>(n)], p.abs_a)) {
            core_ok = false;
            fail_index = n;
        }
    }

    // Basin detection against the attracting cycle.  When an orbit overflows
    // to the far right with cos(Im) < 0, the true next iterate is a + (tiny);
    // continue there instead of giving up (direction is exact, error < e^-690).
    int basin_hit = -1;
    if (cycle.kind == CycleKind::attracting && !cycle.points.empty()) {
        cplx w = z;
        for (int it = 0; it <= opt.basin_iters; ++it) {
            for (cplx q : cycle.points) {
                if (std::abs(w - q) < opt.basin_tol) {
                    basin_hit = it;
                    break;
                }
            }
            if (basin_hit >= 0) break;
            if (w.real() > 690.0) {
                if (std::cos(w.imag()) < 0.0) {
                    w = p.a;
                    continue;
                }
                break; // headed far right: not reaching the basin in budget
            }
            if (std::abs(w) > 1e290) break;
            w = p.apply(w);
        }
    }

    pc.basin_hit_iter = basin_hit;
    pc.fail_index = fail_index;
    if (basin_hit >= 0) {
        pc.label = PointLabel::basin; // basin wins ties by design
    } else if (core_ok) {
        pc.label = PointLabel::fast_core_verified;
    } else if (overflowed) {
        pc.label = PointLabel::escaping_numerical;
    } else {
        pc.label = PointLabel::meandering_candidate;
    }
    return pc;
}

EscapeShiftResult certified_escape_shift(cplx z, const Parameter& p, double R,
                                         int depth) {
    const double threshold = std::max(3.0, std::log(1.0 + 2.0 * (p.abs_a + 1.0)));
    if (R < threshold - 1e-12)
        throw std::invalid_argument("certified_escape_shift: R below valid threshold");

    EscapeShiftResult res;
    const double mu = R + 1.0;
    const double anchor_min = std::max(R + 3.0, continued_growth_K(mu, p));

    // Compute the orbit prefix while representable.
    std::vector<cplx> orbit{z};
    for (int k = 0; k < depth; ++k) {
        const cplx& w = orbit.back();
        if (w.real() > 709.0 || std::abs(w) > 1e290) break;
        orbit.push_back(p.apply(w));
    }

    for (size_t m = 0; m < orbit.size(); ++m) {
        if (orbit[m].real() < anchor_min) continue;
        // Side conditions on the computable iterates after the anchor.
        int verified = 0;
        res.reject_index = -1;
        bool ok = true;
        for (size_t k = m; k < orbit.size() && static_cast<int>(k - m) <= depth; ++k) {
            const cplx fk = orbit[k];
            const double side = std::max(-fk.real(), std::abs(fk.imag()));
            const TowerValue lim = iterate_F(mu, static_cast<int>(k - m));
            if (TowerValue::from_value(side) > lim) {
                ok = false;
                res.reject_index = static_cast<int>(k - m);
                break;
            }
            ++verified;
        }
        if (!ok) continue;
        res.certified = true;
        res.m = static_cast<int>(m);
        res.anchor_re = orbit[m].real();
        res.verified_steps = verified;
        res.bound = iterate_F(orbit[m].real() - 2.0, verified);
        return res;
    }
    res.certified = false;
    res.reason = "no computed iterate reached the anchor threshold with valid side conditions";
    return res;
}

} // namespace expoweb
