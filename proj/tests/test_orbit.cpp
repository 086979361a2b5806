#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "expoweb/orbit.hpp"

using namespace expoweb;

namespace {

// Independent oracle: the negative fixed point of e^x + a (real a) by
// bisection on g(x) = e^x + a - x.
double attracting_fixed_point(double a) {
    double lo = -10.0, hi = 0.0;
    auto g = [a](double x) { return std::exp(x) + a - x; };
    const bool bracketed = (g(lo) > 0.0) != (g(hi) > 0.0);
    REQUIRE(bracketed);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((g(lo) > 0.0) == (g(mid) > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("iterate_map basics and bailout") {
    const Parameter p(cplx(-2.0, 0.0));
    const Orbit o = iterate_map(cplx(0.0, 0.0), p, 5, 1e10);
    REQUIRE(o.points.size() == 6);
    CHECK(o.points[1] == cplx(-1.0, 0.0));
    CHECK(o.terminated_by == OrbitEnd::depth_exhausted);

    const Orbit esc = iterate_map(cplx(10.0, 0.0), p, 10, 1e10);
    CHECK(esc.terminated_by == OrbitEnd::overflow);
    CHECK(esc.points.size() < 11);
    CHECK_THROWS_AS(iterate_map(cplx(0, 0), p, -1, 1.0), std::invalid_argument);
}

TEST_CASE("find_cycle: attracting fixed point for a = -2") {
    const Parameter p(cplx(-2.0, 0.0));
    const Cycle c = find_cycle(p);
    REQUIRE(c.period == 1);
    REQUIRE(c.points.size() == 1);
    const double q = attracting_fixed_point(-2.0);
    CHECK(c.points[0].real() == doctest::Approx(q).epsilon(1e-10));
    CHECK(std::abs(c.points[0].imag()) < 1e-12);
    CHECK(std::abs(c.multiplier) == doctest::Approx(std::exp(q)).epsilon(1e-8));
    CHECK(c.kind == CycleKind::attracting);
}

TEST_CASE("find_cycle: attracting period-3 cycle for a = 2.061 + 1.569i") {
    const Parameter p(cplx(2.061, 1.569));
    const Cycle c = find_cycle(p);
    REQUIRE(c.period == 3);
    CHECK(std::abs(c.multiplier) == doctest::Approx(0.20442).epsilon(1e-3));
    CHECK(c.kind == CycleKind::attracting);
    // The cycle is genuinely periodic: f^3 fixes each point.
    for (cplx w : c.points) {
        cplx v = w;
        for (int k = 0; k < 3; ++k) v = p.apply(v);
        CHECK(std::abs(v - w) < 1e-9);
    }
    // One cycle point sits far left (the preimage branch of the fast leg).
    double min_re = 1e9;
    for (cplx w : c.points) min_re = std::min(min_re, w.real());
    CHECK(min_re == doctest::Approx(-5.697268).epsilon(1e-4));
}

TEST_CASE("find_cycle: parabolic fixed point flagged for a = -1") {
    // Convergence toward the multiplier-1 point at 0 is O(1/n): the detector
    // needs a larger iteration budget than the attracting cases.
    const Parameter p(cplx(-1.0, 0.0));
    const Cycle c = find_cycle(p, 20000);
    REQUIRE(c.period == 1);
    CHECK(std::abs(c.points[0]) < 1e-6);
    CHECK(c.kind == CycleKind::parabolic_suspect);
}

TEST_CASE("find_cycle: escaping singular orbit yields no cycle") {
    const Parameter p(cplx(1.0, 0.0));
    const Cycle c = find_cycle(p);
    CHECK(c.kind == CycleKind::none);
    CHECK(c.period == 0);
}

TEST_CASE("classify_point: basin, fast core, and meandering labels") {
    const Parameter p(cplx(-2.0, 0.0));
    const GrowthConstants cfg = make_growth_constants(p, 1.0, 4.0, 3.0, std::log(10.0));
    const Cycle cycle = find_cycle(p);
    ClassifyOptions opt;

    const PointClass basin = classify_point(cplx(0.0, 0.0), p, cfg, cycle, opt);
    CHECK(basin.label == PointLabel::basin);
    CHECK(basin.basin_hit_iter >= 0);

    const PointClass core = classify_point(cplx(6.0, 0.0), p, cfg, cycle, opt);
    CHECK(core.label == PointLabel::fast_core_verified);

    // Parabolic parameter: no attracting cycle, orbit converges to 0 slowly,
    // never passes the escape thresholds.
    const Parameter pp(cplx(-1.0, 0.0));
    const GrowthConstants cfg1 =
        make_growth_constants(pp, 1.0, 4.0, 3.0, std::log(10.0));
    const PointClass meander =
        classify_point(cplx(-0.5, 0.0), pp, cfg1, find_cycle(pp), opt);
    CHECK(meander.label == PointLabel::meandering_candidate);
    CHECK(meander.fail_index >= 0);
}

TEST_CASE("classify_point: basin wins ties by design") {
    // Start deep in the basin but with |z| above every small threshold:
    // both detectors could fire; label must be basin.
    const Parameter p(cplx(-2.0, 0.0));
    const GrowthConstants cfg =
        make_growth_constants(p, 1.0, 4.0, 3.0, std::log(10.0));
    const Cycle cycle = find_cycle(p);
    ClassifyOptions opt;
    const cplx q = cycle.points[0];
    const PointClass pc = classify_point(q, p, cfg, cycle, opt);
    CHECK(pc.label == PointLabel::basin);
    CHECK(pc.basin_hit_iter == 0);
}

TEST_CASE("classify_point overload with precomputed thresholds agrees") {
    const Parameter p(cplx(-2.0, 0.0));
    const GrowthConstants cfg =
        make_growth_constants(p, 1.0, 4.0, 3.0, std::log(10.0));
    const Cycle cycle = find_cycle(p);
    ClassifyOptions opt;
    const std::vector<double> lm = log_M_upper(cfg.R, p, opt.depth, cfg.K);
    for (double x = -3.0; x <= 7.0; x += 0.63) {
        for (double y = -3.0; y <= 3.0; y += 0.77) {
            const PointClass a = classify_point(cplx(x, y), p, cfg, cycle, opt);
            const PointClass b = classify_point(cplx(x, y), p, lm, cycle, opt);
            CHECK(a.label == b.label);
            CHECK(a.basin_hit_iter == b.basin_hit_iter);
        }
    }
}

TEST_CASE("certified escape shift anchors and bounds") {
    const Parameter p(cplx(-2.0, 0.0));
    const EscapeShiftResult r = certified_escape_shift(cplx(10.0, 0.0), p, 3.0, 6);
    REQUIRE(r.certified);
    CHECK(r.m == 0);
    CHECK(r.anchor_re == doctest::Approx(10.0));
    CHECK(r.verified_steps >= 1);
    CHECK(r.bound >= TowerValue::from_value(std::expm1(8.0)).log().apply_F().apply_F());

    // The basin point never anchors.
    const EscapeShiftResult no = certified_escape_shift(cplx(0.0, 0.0), p, 3.0, 6);
    CHECK_FALSE(no.certified);

    CHECK_THROWS_AS(certified_escape_shift(cplx(10.0, 0.0), p, 0.5, 4),
                    std::invalid_argument);
}

TEST_CASE("extended iterates degrade conservatively") {
    const Parameter p(cplx(-2.0, 0.0));
    ExtIterate it;
    it.kind = ExtKind::fin;
    it.w = cplx(800.0, 0.0); // e^800 overflows doubles

    const ExtIterate e1 = it.step(p);
    CHECK(e1.kind == ExtKind::expf);
    CHECK(e1.w == cplx(800.0, 0.0));
    CHECK(e1.modulus_at_least(700.0, p.abs_a));
    CHECK_FALSE(e1.real_part_at_most(-2.0, p.abs_a)); // points far right

    const ExtIterate e2 = e1.step(p);
    CHECK(e2.kind == ExtKind::magre);
    CHECK(e2.modulus_at_least(1e10, p.abs_a));

    const ExtIterate e3 = e2.step(p);
    CHECK(e3.kind == ExtKind::lost);
    CHECK_FALSE(e3.modulus_at_least(0.0, p.abs_a));
    CHECK_FALSE(e3.real_part_at_most(-1.0, p.abs_a));
}

TEST_CASE("extended iterates: leftward overflow certifies the half-plane") {
    const Parameter p(cplx(-2.0, 0.0));
    ExtIterate it;
    it.kind = ExtKind::expf;
    it.w = cplx(800.0, 3.14159265358979); // cos ~ -1: huge negative real part
    CHECK(it.real_part_at_most(-100.0, p.abs_a));
    // Direction toward +infinity: magnitude bound still fine.
    CHECK(it.modulus_at_least(700.0, p.abs_a));
    // Sideways (cos ~ 0 exactly at pi/2) keeps magnitude but loses the
    // half-plane certificate.
    it.w = cplx(800.0, std::acos(-1.0) / 2.0);
    CHECK_FALSE(it.real_part_at_most(-100.0, p.abs_a));
}

TEST_CASE("extended iterates match plain iteration while representable") {
    const Parameter p(cplx(2.061, 1.569));
    cplx w(1.3, -0.7);
    ExtIterate it;
    it.kind = ExtKind::fin;
    it.w = w;
    for (int k = 0; k < 6; ++k) {
        w = p.apply(w);
        it = it.step(p);
        if (it.kind != ExtKind::fin) break;
        CHECK(std::abs(w - it.w) <= 1e-12 * std::max(1.0, std::abs(w)));
    }
}
