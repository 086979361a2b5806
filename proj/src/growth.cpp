#include "expoweb/growth.hpp"

#include <algorithm>
#include <cmath>

namespace expoweb {

double continued_growth_K(double mu, const Parameter& p) {
    return std::max(2.0 + std::log(5.0 + p.abs_a), mu + 2.0);
}

GrowthConstants make_growth_constants(const Parameter& p, double K, double mu,
                                      double R, double half_plane_c) {
    if (K < 1.0) throw std::invalid_argument("growth constant K must be >= 1");
    if (mu < 0.0) throw std::invalid_argument("mu must be >= 0");
    if (R <= 0.0) throw std::invalid_argument("R must be > 0");
    GrowthConstants g;
    g.K = K;
    g.mu = mu;
    g.K_growth = continued_growth_K(mu, p);
    g.R = R;
    g.half_plane_c = half_plane_c;
    return g;
}

namespace {

double modulus_at(double r, double theta, const Parameter& p) {
    return std::abs(std::exp(r * std::exp(cplx(0.0, theta))) + p.a);
}

} // namespace

std::optional<double> max_modulus(double r, const Parameter& p) {
    if (!(r > 0.0)) throw std::invalid_argument("max_modulus requires r > 0");
    if (r > 700.0) return std::nullopt; // e^r not representable

    constexpr int ngrid = 4096;
    const bool real_a = (p.a.imag() == 0.0);
    // Conjugation symmetry: for real a the modulus is even in theta.
    const double span = real_a ? M_PI : 2.0 * M_PI;
    double best_v = -1.0, best_t = 0.0;
    for (int i = 0; i < ngrid; ++i) {
        double th = span * i / ngrid - (real_a ? 0.0 : M_PI);
        double v = modulus_at(r, th, p);
        if (v > best_v) {
            best_v = v;
            best_t = th;
        }
    }
    // Golden-section refinement around the grid maximum.
    double lo = best_t - span / ngrid, hi = best_t + span / ngrid;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
    double fc = modulus_at(r, c, p), fd = modulus_at(r, d, p);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = modulus_at(r, c, p);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = modulus_at(r, d, p);
        }
    }
    return std::max(best_v, modulus_at(r, 0.5 * (lo + hi), p));
}

TowerInterval max_modulus_iter(double R, const Parameter& p, int n, double K) {
    const double threshold = std::max(3.0, std::log(1.0 + 2.0 * (p.abs_a + K)));
    if (R < threshold - 1e-12)
        throw std::invalid_argument("max_modulus_iter: R below sandwich threshold");

    double r = R;
    int k = 0;
    for (; k < n; ++k) {
        auto m = max_modulus(r, p);
        if (!m) break; // radius too large for direct evaluation
        r = *m;
    }
    TowerValue point = TowerValue::from_value(r);
    if (k == n) return TowerInterval{point, point};

    // Bracket the remaining steps: each application of the map keeps the
    // maximum modulus between F(m-1)+K and F(m+1)-K.
    TowerValue lo = point, hi = point;
    for (; k < n; ++k) {
        lo = lo.add(-1.0).apply_F().add(K);
        hi = hi.add(1.0).apply_F().add(-K);
    }
    return TowerInterval{lo, hi};
}

std::vector<double> log_M_upper(double R, const Parameter& p, int depth, double K) {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(depth) + 1);
    out.push_back(std::log(R));
    double r = R;
    bool direct = true;
    for (int k = 1; k <= depth; ++k) {
        if (direct) {
            if (auto m = max_modulus(r, p)) {
                r = *m;
                out.push_back(std::log(r));
                continue;
            }
            direct = false;
        }
        // One bracket step: M^k <= F(prev + 1) - K <= e^{prev + 1}.
        const double prev_log = out.back();
        if (prev_log > 690.0) {
            out.push_back(HUGE_VAL);
        } else {
            out.push_back(std::exp(prev_log) + 1.0);
        }
    }
    (void)K;
    return out;
}

RZeroReport verify_R_zero(const Parameter& p, const std::vector<double>& R_samples) {
    RZeroReport rep;
    rep.all_hold = true;
    for (double R : R_samples) {
        if (!(R > 0.0)) throw std::invalid_argument("verify_R_zero: R must be > 0");
        RZeroSample s;
        s.R = R;
        if (auto m = max_modulus(R, p)) {
            s.M = *m;
        } else {
            // e^R overflows, so M(R) >= e^R - |a| is astronomically > R.
            s.M = HUGE_VAL;
        }
        s.margin = s.M - R;
        s.holds = s.M > R;
        rep.all_hold = rep.all_hold && s.holds;
        rep.samples.push_back(s);
    }
    return rep;
}

bool growth_sandwich_holds(cplx z, double K, const Parameter& p, double rel_tol) {
    if (K < 1.0) throw std::invalid_argument("growth_sandwich_holds: K must be >= 1");
    const double x = z.real();
    const double threshold = std::log(1.0 + 2.0 * (p.abs_a + K));
    if (x < threshold - 1e-12)
        throw std::invalid_argument("growth_sandwich_holds: Re z below threshold");

    // |e^z + a| = e^x * |e^{iy} + a e^{-z}|; the second factor is computed in
    // doubles (a e^{-z} underflows harmlessly for large x), so the log of the
    // modulus stays representable for any x.
    const cplx unit = std::exp(cplx(0.0, z.imag())) + p.a * std::exp(-z);
    const double log_mod = x + std::log(std::abs(unit));
    const TowerValue mod = TowerValue::from_log(log_mod);

    // Relative tolerance applied multiplicatively, i.e. additively in logs.
    const double slack = std::log1p(rel_tol);
    const TowerValue lo_t = eval_F(x - 1.0).add(K);
    const TowerValue hi_t = eval_F(x + 1.0).add(-K);
    const TowerValue mod_hi = TowerValue::from_log(log_mod + slack);
    const TowerValue mod_lo = TowerValue::from_log(log_mod - slack);
    return lo_t <= mod_hi && mod_lo <= hi_t;
}

ContinuedGrowthResult continued_growth_bound(cplx z, double mu, const Parameter& p,
                                             const std::vector<cplx>& orbit_prefix) {
    if (mu < 0.0) throw std::invalid_argument("continued_growth_bound: mu < 0");
    if (z.real() < continued_growth_K(mu, p) - 1e-12)
        throw std::invalid_argument("continued_growth_bound: Re z below K(mu)");
    if (!orbit_prefix.empty() && orbit_prefix.front() != z)
        throw std::invalid_argument("continued_growth_bound: prefix must start at z");

    // Validate the supplied prefix against a fresh orbit computation.
    cplx w = z;
    for (size_t k = 1; k < orbit_prefix.size(); ++k) {
        w = p.apply(w);
        if (std::abs(w) > 1e100) break; // beyond here doubles agree trivially or not at all
        if (std::abs(w - orbit_prefix[k]) > 1e-9 * std::max(1.0, std::abs(w)))
            throw std::invalid_argument("continued_growth_bound: prefix mismatch");
    }

    const int n = static_cast<int>(orbit_prefix.size());
    ContinuedGrowthResult res{true, n, TowerValue{}, -1};
    for (int k = 0; k < n; ++k) {
        const cplx fk = orbit_prefix[static_cast<size_t>(k)];
        const TowerValue lim = iterate_F(mu, k);
        const double side = std::max(-fk.real(), std::abs(fk.imag()));
        if (TowerValue::from_value(side) > lim) {
            res.certified = false;
            res.reject_index = k;
            return res;
        }
    }
    res.bound = iterate_F(z.real() - 2.0, n);
    return res;
}

} // namespace expoweb
