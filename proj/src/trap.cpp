#include "expoweb/trap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expoweb {

double dist_to_polyline(cplx z, const std::vector<cplx>& poly) {
    double best = HUGE_VAL;
    for (size_t i = 0; i + 1 < poly.size(); ++i) {
        const cplx p = poly[i], q = poly[i + 1];
        const cplx d = q - p;
        const double dd = std::norm(d);
        double t = 0.0;
        if (dd > 0.0) {
            t = ((z.real() - p.real()) * d.real() + (z.imag() - p.imag()) * d.imag()) / dd;
            t = std::clamp(t, 0.0, 1.0);
        }
        best = std::min(best, std::abs(z - (p + t * d)));
    }
    return best;
}

bool TrapSet::membership(cplx z, double tol) const {
    if (z.real() <= -c) return true;
    if (base_arc.size() < 2) return false;
    const double mid = 0.5 * (base_im_min + base_im_max);
    const double k0 = std::round((z.imag() - mid) / (2.0 * M_PI));
    for (int dk = -1; dk <= 1; ++dk) {
        const double k = k0 + dk;
        const cplx zz = z - cplx(0.0, 2.0 * M_PI * k);
        if (zz.imag() < base_im_min - tol - 0.5 || zz.imag() > base_im_max + tol + 0.5)
            continue;
        if (dist_to_polyline(zz, base_arc) <= tol) return true;
    }
    return false;
}

namespace {

double wrap_pi(double x) {
    while (x > M_PI) x -= 2.0 * M_PI;
    while (x < -M_PI) x += 2.0 * M_PI;
    return x;
}

} // namespace

std::vector<cplx> pull_polyline(const std::vector<cplx>& path, cplx seed_img,
                                const Parameter& p) {
    if (path.size() < 2) throw std::invalid_argument("pull_polyline: path too short");
    if (std::abs(p.apply(seed_img) - path[0]) >
        1e-6 * std::max(1.0, std::abs(path[0])))
        throw std::invalid_argument("pull_polyline: seed does not map onto path start");

    std::vector<cplx> out;
    out.reserve(path.size());
    out.push_back(seed_img);
    cplx prev_fwd = path[0];
    cplx prev_log = std::log(path[0] - p.a);
    double cur_im = seed_img.imag();

    for (size_t i = 1; i < path.size(); ++i) {
        // Bisect forward segments whose pullback would jump by more than
        // pi/2: branch selection relies on continuity.
        std::vector<cplx> pending{path[i]};
        int guard = 0;
        while (!pending.empty()) {
            const cplx w = pending.back();
            const cplx l = std::log(w - p.a);
            const double dim = wrap_pi(l.imag() - prev_log.imag());
            if (std::abs(dim) > M_PI / 2.0 && std::abs(w - prev_fwd) > 1e-12) {
                if (++guard > 80)
                    throw std::runtime_error(
                        "pull_polyline: branch ambiguity near vertex " + std::to_string(i));
                pending.push_back(0.5 * (prev_fwd + w));
                continue;
            }
            cur_im += dim;
            prev_log = l;
            prev_fwd = w;
            out.push_back(cplx(l.real(), cur_im));
            pending.pop_back();
        }
    }
    return out;
}

namespace {

// A vertex of the access arc is acceptable when it is in the attracting
// basin, or (real-axis tail beyond the repelling fixed point) its escape is
// certified by the continued-growth machinery.
void verify_arc_vertices(const std::vector<cplx>& vertices, const Parameter& p,
                         const Cycle& cycle) {
    if (cycle.kind != CycleKind::attracting || cycle.points.empty())
        throw std::runtime_error("access arc requires an attracting cycle");
    const double R = std::max(3.0, std::log(1.0 + 2.0 * (p.abs_a + 1.0)));
    for (size_t i = 0; i < vertices.size(); ++i) {
        const cplx z = vertices[i];
        // Basin test with the far-right continuation (see classify_point).
        cplx w = z;
        bool basin = false;
        for (int it = 0; it <= 400 && !basin; ++it) {
            for (cplx q : cycle.points)
                if (std::abs(w - q) < 1e-7) {
                    basin = true;
                    break;
                }
            if (basin) break;
            if (w.real() > 690.0) {
                if (std::cos(w.imag()) < 0.0) {
                    w = p.a;
                    continue;
                }
                break;
            }
            if (std::abs(w) > 1e290) break;
            w = p.apply(w);
        }
        if (basin) continue;
        if (certified_escape_shift(z, p, R, 64).certified) continue;
        throw std::runtime_error("access arc vertex " + std::to_string(i) +
                                 " is neither basin nor escape-certified");
    }
}

std::vector<cplx> logspace_ray(double lo, double hi, int n) {
    // n values from lo to hi, log-spaced (lo, hi > 0).
    std::vector<cplx> out;
    out.reserve(static_cast<size_t>(n));
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < n; ++i)
        out.push_back(cplx(std::exp(la + (lb - la) * i / (n - 1)), 0.0));
    return out;
}

size_t monotone_from(const std::vector<cplx>& v) {
    size_t idx = v.size() - 1;
    while (idx > 0 && v[idx - 1].real() <= v[idx].real()) --idx;
    return idx;
}

} // namespace

AccessArc build_access_arc(const Parameter& p, const Cycle& cycle, double eps,
                           double sigma_re_cap) {
    if (!(eps > 0.0) || eps >= 1.0)
        throw std::invalid_argument("build_access_arc: need 0 < eps < 1");
    AccessArc arc;

    if (p.a.imag() == 0.0 && p.a.real() < -1.0) {
        // Real parameter: the real axis from the basin to +infinity works.
        // Vertices log-spaced in distance from a so the tail reaches
        // e^{sigma_re_cap} (the trap arc then extends to Re ~ sigma_re_cap).
        const double cap = std::exp(sigma_re_cap);
        const int n = 157;
        std::vector<cplx> ray = logspace_ray(eps, cap - p.a.real(), n);
        arc.vertices.reserve(ray.size());
        for (cplx d : ray) arc.vertices.push_back(p.a + d);
        arc.realpart_monotone_from = 0;
        verify_arc_vertices(arc.vertices, p, cycle);
        return arc;
    }

    // General attracting parameter: pull a negative-real-axis ray back
    // period-1 times through branch-continuous logarithms.
    if (cycle.kind != CycleKind::attracting || cycle.points.empty())
        throw std::runtime_error("build_access_arc: attracting cycle required");
    const int period = cycle.period;
    int anchor = 0;
    for (int i = 1; i < period; ++i)
        if (cycle.points[static_cast<size_t>(i)].real() <
            cycle.points[static_cast<size_t>(anchor)].real())
            anchor = i;

    // Seed path: connector from the left-most cycle point to -t0, then the
    // negative real ray out to -T.
    const double t0 = 8.0, T = 1e290;
    const cplx w_anchor = cycle.points[static_cast<size_t>(anchor)];
    std::vector<cplx> path;
    const int nseg = 60;
    for (int i = 0; i <= nseg; ++i)
        path.push_back(w_anchor + (cplx(-t0, 0.0) - w_anchor) * (double(i) / nseg));
    for (cplx s : logspace_ray(t0, T, 800))
        if (s.real() > t0) path.push_back(-s);

    const int n_pull = std::max(1, period - 1);
    std::vector<cplx> prev_path; // path before the final pullback (for the tail)
    for (int step = 1; step <= n_pull; ++step) {
        const int idx = ((anchor - step) % period + period) % period;
        prev_path = path;
        path = pull_polyline(path, cycle.points[static_cast<size_t>(idx)], p);
    }

    // Analytic tail: the pre-final path ends at u_max + i*im_inf with its
    // imaginary part already settled at the asymptote; continue the final
    // pullback as Log(u + i*im_inf - a) for u out to e^{sigma_re_cap}.
    const double im_inf = prev_path.back().imag();
    const double u_start = prev_path.back().real();
    const double u_cap = std::exp(std::min(sigma_re_cap, 700.0));
    if (u_cap > u_start * 1.001) {
        std::vector<cplx> tail_u = logspace_ray(u_start, u_cap, 400);
        // Continuity offset (2*pi multiple) against the computed arc end.
        const cplx probe = std::log(cplx(u_start, im_inf) - p.a);
        const double off =
            2.0 * M_PI * std::round((path.back().imag() - probe.imag()) / (2.0 * M_PI));
        for (size_t i = 1; i < tail_u.size(); ++i) {
            const cplx l = std::log(cplx(tail_u[i].real(), im_inf) - p.a);
            path.push_back(l + cplx(0.0, off));
        }
    }

    // Trim so the arc starts exactly on |z - a| = eps.
    size_t i0 = 0;
    while (i0 < path.size() && std::abs(path[i0] - p.a) < eps) ++i0;
    if (i0 == 0 || i0 == path.size())
        throw std::runtime_error("build_access_arc: arc does not cross the eps-circle");
    cplx zin = path[i0 - 1], zout = path[i0];
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (std::abs(zin + (zout - zin) * mid - p.a) < eps)
            lo = mid;
        else
            hi = mid;
    }
    arc.vertices.push_back(zin + (zout - zin) * lo);
    arc.vertices.insert(arc.vertices.end(), path.begin() + static_cast<long>(i0),
                        path.end());
    arc.realpart_monotone_from = monotone_from(arc.vertices);
    verify_arc_vertices(arc.vertices, p, cycle);
    return arc;
}

TrapSet build_trap(const Parameter& p, double eps, const AccessArc& sigma) {
    if (sigma.vertices.size() < 2)
        throw std::invalid_argument("build_trap: arc too short");
    TrapSet t;
    t.a = p.a;
    t.c = -std::log(eps);
    t.base_arc = pull_polyline(sigma.vertices, std::log(sigma.vertices[0] - p.a), p);

    // Analytic tail: the access arc continues horizontally at its asymptotic
    // imaginary part, so the preimage component continues as
    // Log(v + i*im_tail - a).  Extend it to Re ~ 35 so certificate edges can
    // run along the translates out to the right wall.
    const cplx sig_end = sigma.vertices.back();
    if (sig_end.real() > 5.0) {
        const double im_tail = sig_end.imag();
        const double v_start = sig_end.real();
        const double v_cap = std::exp(35.0);
        if (v_cap > v_start * 1.001) {
            const cplx probe = std::log(cplx(v_start, im_tail) - p.a);
            const double off = 2.0 * M_PI *
                std::round((t.base_arc.back().imag() - probe.imag()) / (2.0 * M_PI));
            const int ntail = 400;
            const double la = std::log(v_start), lb = std::log(v_cap);
            for (int i = 1; i < ntail; ++i) {
                const double v = std::exp(la + (lb - la) * i / (ntail - 1));
                t.base_arc.push_back(std::log(cplx(v, im_tail) - p.a) +
                                     cplx(0.0, off));
            }
        }
    }
    t.base_im_min = HUGE_VAL;
    t.base_im_max = -HUGE_VAL;
    for (cplx z : t.base_arc) {
        t.base_im_min = std::min(t.base_im_min, z.imag());
        t.base_im_max = std::max(t.base_im_max, z.imag());
    }
    t.delta = 2.0 * M_PI + (t.base_im_max - t.base_im_min);
    return t;
}

double strip_delta(const TrapSet& trap) {
    return 2.0 * M_PI + (trap.base_im_max - trap.base_im_min);
}

double choose_R(cplx z0, const TrapSet& trap, const Parameter& p) {
    return std::max({std::abs(z0), trap.c, 3.0,
                     std::log(1.0 + 2.0 * (p.abs_a + trap.delta))}) +
           1.0;
}

XEvidence x_membership(cplx z, const TrapSet& trap, double R, const Parameter& p,
                       int depth) {
    if (depth < 1) throw std::invalid_argument("x_membership: depth must be >= 1");
    XEvidence ev;
    const std::vector<double> logM = log_M_upper(R, p, depth);

    // k = 0 term, literally: |z| >= R (no earlier trap entry exists).
    if (!(std::abs(z) >= R)) {
        ev.fail_index = 0;
        ev.reason = "|z| < R";
        return ev;
    }
    ev.threshold_indices.push_back(0);

    ExtIterate cur;
    cur.kind = ExtKind::fin;
    cur.w = z;
    for (int k = 1; k <= depth; ++k) {
        // Trap test on f^{k-1}: entry at j = k-1 covers every later term.
        if (cur.kind == ExtKind::fin) {
            if (trap.membership(cur.w)) {
                ev.verified = true;
                ev.first_trap_index = k - 1;
                return ev;
            }
        } else if (cur.real_part_at_most(-trap.c, p.abs_a)) {
            ev.verified = true;
            ev.first_trap_index = k - 1;
            return ev;
        }
        cur = cur.step(p);
        if (cur.kind == ExtKind::lost) {
            ev.fail_index = k;
            ev.reason = "orbit direction unknown past overflow";
            return ev;
        }
        if (!cur.modulus_at_least(logM[static_cast<size_t>(k)], p.abs_a)) {
            ev.fail_index = k;
            ev.reason = "below threshold and no prior trap entry";
            return ev;
        }
        ev.threshold_indices.push_back(k);
    }
    ev.verified = true;
    return ev;
}

Rectangle bounding_rectangle(cplx z0, double R, const TrapSet& trap,
                             const Parameter& p, double margin) {
    (void)z0;
    Rectangle r;
    r.margin = margin;
    r.re_min = -trap.c - margin;
    r.re_max = std::max(R + 3.0, continued_growth_K(R + 1.0, p)) + margin;
    r.im_abs_max = R + trap.delta + margin;
    return r;
}

namespace {

// Samples along an arc translate clipped to Re <= x_max, preceded by a
// half-plane connector from Re = x_left to the arc start.
std::vector<cplx> arc_side_samples(const TrapSet& trap, double k, double x_left,
                                   double x_max, int n) {
    std::vector<cplx> pts;
    pts.reserve(static_cast<size_t>(n));
    const cplx off(0.0, 2.0 * M_PI * k);
    const cplx start = trap.base_arc.front() + off;
    const int ncon = std::max(8, n / 12);
    for (int i = 0; i < ncon; ++i)
        pts.push_back(cplx(x_left + (start.real() - x_left) * (i + 0.5) / ncon,
                           start.imag()));
    // Arc-length-uniform samples along the clipped translate.
    std::vector<std::pair<cplx, cplx>> segs;
    for (size_t i = 0; i + 1 < trap.base_arc.size(); ++i) {
        if (trap.base_arc[i].real() > x_max) break;
        segs.emplace_back(trap.base_arc[i] + off, trap.base_arc[i + 1] + off);
    }
    const int npts = n - ncon;
    double tot = 0.0;
    for (auto& s : segs) tot += std::abs(s.second - s.first);
    const double step = tot / npts;
    double acc = step / 2.0;
    for (auto& s : segs) {
        const double L = std::abs(s.second - s.first);
        double t = acc;
        while (t < L && static_cast<int>(pts.size()) < n) {
            pts.push_back(s.first + (s.second - s.first) * (t / L));
            t += step;
        }
        acc = t - L;
    }
    return pts;
}

double last_im_below(const TrapSet& trap, double k, double x_max) {
    const double off = 2.0 * M_PI * k;
    double im = trap.base_arc.front().imag() + off;
    for (const cplx& z : trap.base_arc) {
        if (z.real() > x_max) break;
        im = z.imag() + off;
    }
    return im;
}

} // namespace

SeparationCertificate separation_certificate(cplx z0, const Parameter& p,
                                             double eps, int depth,
                                             int samples_per_side) {
    if (depth < 2) throw std::invalid_argument("separation_certificate: depth >= 2");
    if (samples_per_side < 8)
        throw std::invalid_argument("separation_certificate: too few samples");

    const Cycle cycle = find_cycle(p);
    if (cycle.kind != CycleKind::attracting)
        throw std::runtime_error(
            "separation_certificate: no attracting cycle (parabolic deferred)");

    // Precondition: the closed eps-ball around a lies in the basin.
    {
        ClassifyOptions opt;
        GrowthConstants dummy = make_growth_constants(p, 1.0, 0.0, 3.0, -std::log(eps));
        for (int i = 0; i < 64; ++i) {
            const cplx z = p.a + eps * std::exp(cplx(0.0, 2.0 * M_PI * i / 64.0));
            if (classify_point(z, p, dummy, cycle, opt).label != PointLabel::basin)
                throw std::runtime_error(
                    "separation_certificate: eps-ball boundary not fully in basin; "
                    "decrease eps");
        }
    }

    const AccessArc arc = build_access_arc(p, cycle, eps);
    const TrapSet trap = build_trap(p, eps, arc);
    const double R = choose_R(z0, trap, p);
    const double m = 1.0, slack = 6.0;
    const double x_R = std::max(R + 3.0, continued_growth_K(R + 1.0, p)) + m + slack;

    SeparationCertificate cert;
    cert.z0 = z0;
    cert.a = p.a;
    cert.eps = eps;
    cert.R = R;
    cert.depth = depth;
    cert.rectangle = bounding_rectangle(z0, R, trap, p, m);
    cert.k_top = static_cast<int>(
        std::ceil((R + trap.delta + m - trap.base_im_min) / (2.0 * M_PI)));
    cert.k_bot = static_cast<int>(
        std::ceil((R + trap.delta + m + trap.base_im_max) / (2.0 * M_PI)));
    cert.boundary_re_min = -(R + m);
    cert.boundary_re_max = x_R;
    cert.boundary_im_top = trap.base_arc.front().imag() + 2.0 * M_PI * cert.k_top;
    cert.boundary_im_bot = trap.base_arc.front().imag() - 2.0 * M_PI * cert.k_bot;

    const int n = samples_per_side;
    std::vector<cplx> boundary;
    boundary.reserve(static_cast<size_t>(4 * n));
    for (int i = 0; i < n; ++i)
        boundary.push_back(cplx(cert.boundary_re_min,
                                cert.boundary_im_bot +
                                    (cert.boundary_im_top - cert.boundary_im_bot) *
                                        (i + 0.5) / n));
    for (cplx z : arc_side_samples(trap, cert.k_top, cert.boundary_re_min, x_R, n))
        boundary.push_back(z);
    for (cplx z : arc_side_samples(trap, -cert.k_bot, cert.boundary_re_min, x_R, n))
        boundary.push_back(z);
    const double yrt = last_im_below(trap, cert.k_top, x_R);
    const double yrb = last_im_below(trap, -cert.k_bot, x_R);
    for (int i = 0; i < n; ++i)
        boundary.push_back(cplx(x_R, yrb + (yrt - yrb) * (i + 0.5) / n));

    cert.samples.reserve(boundary.size());
    cert.all_verified = true;
    double perim = 0.0;
    for (size_t i = 0; i < boundary.size(); ++i) {
        BoundarySample s;
        s.z = boundary[i];
        s.evidence = x_membership(s.z, trap, R, p, depth);
        if (!s.evidence.verified) {
            cert.all_verified = false;
            cert.violations.push_back(i);
        }
        if (i > 0) perim += std::abs(boundary[i] - boundary[i - 1]);
        cert.samples.push_back(std::move(s));
    }
    cert.spacing = perim / static_cast<double>(boundary.size() - 1);
    return cert;
}

JuliaTrapResult trap_from_julia(const Parameter& p, double eps, double c,
                                int max_n, int grid) {
    if (grid < 2) throw std::invalid_argument("trap_from_julia: grid too small");
    JuliaTrapResult res;

    // Singular orbit prefix to avoid when drawing the half-plane arc.
    std::vector<cplx> sing{p.a};
    for (int k = 1; k < max_n; ++k) {
        if (sing.back().real() > 690.0 || std::abs(sing.back()) > 1e290) break;
        sing.push_back(p.apply(sing.back()));
    }

    for (int n = 1; n <= max_n && !res.found; ++n) {
        for (int iy = 0; iy < grid && !res.found; ++iy) {
            for (int ix = 0; ix < grid; ++ix) {
                const cplx zeta = p.a + cplx(eps * (2.0 * ix / (grid - 1) - 1.0),
                                             eps * (2.0 * iy / (grid - 1) - 1.0));
                if (std::abs(zeta - p.a) >= eps) continue;
                cplx w = zeta;
                bool dead = false;
                for (int k = 0; k < n; ++k) {
                    if (w.real() > 690.0 || std::abs(w) > 1e290) {
                        dead = true;
                        break;
                    }
                    w = p.apply(w);
                }
                if (dead || !(w.real() <= -c)) continue;
                res.found = true;
                res.n = n;
                res.zeta = zeta;
                break;
            }
        }
    }
    if (!res.found) {
        res.note = "no grid point of D(a,eps) reached {Re <= -c} within max_n steps";
        return res;
    }

    // Arc inside the half-plane starting at f^n(zeta), kept clear of the
    // singular orbit prefix {f^k(a) : k < n}.
    std::vector<cplx> orbit{res.zeta};
    for (int k = 0; k < res.n; ++k) orbit.push_back(p.apply(orbit.back()));
    const cplx w_end = orbit.back();
    double shift = 0.0;
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<cplx> seg;
        const int npts = 100;
        for (int i = 0; i < npts; ++i)
            seg.push_back(w_end + cplx(-20.0 * i / (npts - 1), shift * (i > 0)));
        double mind = HUGE_VAL;
        for (int k = 0; k < res.n && k < static_cast<int>(sing.size()); ++k)
            mind = std::min(mind, dist_to_polyline(sing[static_cast<size_t>(k)], seg));
        if (mind >= 1e-3) {
            res.sigma0 = std::move(seg);
            break;
        }
        shift += 0.01;
    }
    if (res.sigma0.empty()) {
        res.found = false;
        res.note = "could not route the half-plane arc clear of the singular orbit";
        return res;
    }

    // Pull sigma0 back along the witness orbit to an arc through zeta.
    std::vector<cplx> path = res.sigma0;
    for (int k = res.n - 1; k >= 0; --k)
        path = pull_polyline(path, orbit[static_cast<size_t>(k)], p);

    AccessArc arc;
    arc.vertices = path;
    arc.realpart_monotone_from = path.size() - 1;
    TrapSet trap;
    trap.a = p.a;
    trap.c = c;
    trap.base_arc = pull_polyline(arc.vertices, std::log(arc.vertices[0] - p.a), p);
    trap.base_im_min = HUGE_VAL;
    trap.base_im_max = -HUGE_VAL;
    for (cplx z : trap.base_arc) {
        trap.base_im_min = std::min(trap.base_im_min, z.imag());
        trap.base_im_max = std::max(trap.base_im_max, z.imag());
    }
    trap.delta = 2.0 * M_PI + (trap.base_im_max - trap.base_im_min);
    res.trap = std::move(trap);
    res.note = "witness found; trap assembled from the pulled-back arc";
    return res;
}

} // namespace expoweb
