#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "expoweb/growth.hpp"
#include "expoweb/parameter.hpp"
#include "expoweb/tower.hpp"

using namespace expoweb;

TEST_CASE("tower values order consistently across levels") {
    const TowerValue small = TowerValue::from_value(42.0);
    const TowerValue big = TowerValue::from_log(800.0);   // e^800, level 1
    const TowerValue huge = iterate_F(100.0, 3);          // triple exponential
    CHECK(small < big);
    CHECK(big < huge);
    CHECK(small == TowerValue::from_value(42.0));
    CHECK(big.level() == 1);
    CHECK(big.as_double() == HUGE_VAL);
    CHECK(small.finite_double());
}

TEST_CASE("tower canonicalization round-trips through log") {
    const TowerValue v = TowerValue::from_log(1000.0);
    CHECK(v.log() == TowerValue::from_value(1000.0));
    // from_log below the cutoff demotes to a plain double.
    const TowerValue w = TowerValue::from_log(2.0);
    CHECK(w.finite_double());
    CHECK(w.base() == doctest::Approx(std::exp(2.0)));
}

TEST_CASE("F iteration matches direct evaluation while representable") {
    // F(t) = e^t - 1: F(1) = e-1, F^2(1) = e^{e-1}-1, ...
    double direct = 1.0;
    for (int n = 1; n <= 4; ++n) {
        direct = std::expm1(direct);
        const TowerValue t = iterate_F(1.0, n);
        REQUIRE(t.finite_double());
        CHECK(t.as_double() == doctest::Approx(direct).epsilon(1e-12));
    }
    // F^6(1) passes the double cutoff but stays ordered.
    CHECK(iterate_F(1.0, 6) > iterate_F(1.0, 5));
    CHECK(iterate_F(1.0, 7) > iterate_F(1.0, 6));
}

TEST_CASE("F is monotone in its argument at every representable scale") {
    for (int n = 0; n <= 8; ++n) CHECK(iterate_F(1.1, n) > iterate_F(1.0, n));
}

TEST_CASE("continued-growth constant") {
    const Parameter p(cplx(-2.0, 0.0));
    // max(2 + ln 7, mu + 2)
    CHECK(continued_growth_K(5.0, p) == doctest::Approx(7.0));
    CHECK(continued_growth_K(0.0, p) == doctest::Approx(2.0 + std::log(7.0)));
}

TEST_CASE("growth constants validation") {
    const Parameter p(cplx(-2.0, 0.0));
    CHECK_THROWS_AS(make_growth_constants(p, 0.5, 1.0, 3.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_growth_constants(p, 1.0, -1.0, 3.0, 1.0),
                    std::invalid_argument);
    const GrowthConstants g = make_growth_constants(p, 1.0, 5.0, 3.0, 1.0);
    CHECK(g.K_growth == doctest::Approx(7.0));
}

TEST_CASE("maximum modulus on circles: real parameter peaks on the positive axis") {
    const Parameter p(cplx(-2.0, 0.0));
    const auto m3 = max_modulus(3.0, p);
    REQUIRE(m3.has_value());
    CHECK(*m3 == doctest::Approx(std::exp(3.0) - 2.0).epsilon(1e-9));
    const auto m4 = max_modulus(4.0, p);
    REQUIRE(m4.has_value());
    CHECK(*m4 == doctest::Approx(std::exp(4.0) - 2.0).epsilon(1e-9));
    // Past the overflow radius there is no double answer.
    CHECK_FALSE(max_modulus(800.0, p).has_value());
}

TEST_CASE("maximum modulus for a complex parameter is at least e^r - |a|") {
    const Parameter p(cplx(2.061, 1.569));
    const auto m = max_modulus(3.0, p);
    REQUIRE(m.has_value());
    CHECK(*m >= std::exp(3.0) - p.abs_a);
    CHECK(*m <= std::exp(3.0) + p.abs_a + 1e-9);
}

TEST_CASE("iterated maximum modulus brackets obey the F sandwich") {
    const double K = 1.0;
    for (cplx a : {cplx(-2.0, 0.0), cplx(-1.5, 0.0), cplx(2.061, 1.569)}) {
        const Parameter p(a);
        const double R = 3.0;
        for (int n = 0; n <= 6; ++n) {
            const TowerInterval it = max_modulus_iter(R, p, n, K);
            CHECK(it.lo <= it.hi);
            if (n >= 1) {
                const TowerValue lower = iterate_F(R - 1.0, n).add(K);
                const TowerValue upper = iterate_F(R + 1.0, n).add(-K);
                CHECK(lower <= it.hi);
                CHECK(it.lo <= upper);
            }
        }
    }
}

TEST_CASE("iterated maximum modulus rejects radii below the valid threshold") {
    const Parameter p(cplx(-2.0, 0.0));
    CHECK_THROWS_AS(max_modulus_iter(0.5, p, 2, 1.0), std::invalid_argument);
}

TEST_CASE("log-domain upper bounds dominate the bracket and grow monotonically") {
    const Parameter p(cplx(-2.0, 0.0));
    const std::vector<double> lm = log_M_upper(3.0, p, 6);
    REQUIRE(lm.size() == 7);
    CHECK(lm[0] == doctest::Approx(std::log(3.0)));
    CHECK(lm[1] == doctest::Approx(std::log(std::exp(3.0) - 2.0)).epsilon(1e-6));
    for (size_t k = 1; k < lm.size(); ++k) {
        if (std::isfinite(lm[k]))
            CHECK(lm[k] > lm[k - 1]);
        else
            CHECK(lm[k] == HUGE_VAL); // saturated: conservative failure zone
    }
    // Bracket upper ends never exceed the logged bound while comparable.
    for (int n = 0; n <= 3; ++n) {
        const TowerInterval it = max_modulus_iter(3.0, p, n, 1.0);
        if (it.hi.finite_double() && std::isfinite(lm[static_cast<size_t>(n)]))
            CHECK(std::log(it.hi.as_double()) <= lm[static_cast<size_t>(n)] + 1e-9);
    }
}

TEST_CASE("threshold radius is effectively zero: M(R) > R over decades") {
    for (cplx a : {cplx(-2.0, 0.0), cplx(0.5, 0.5), cplx(2.061, 1.569)}) {
        const RZeroReport rep = verify_R_zero(
            Parameter(a), {0.01, 0.1, 1.0, 10.0, 100.0, 1000.0});
        CHECK(rep.all_hold);
        for (const auto& s : rep.samples) CHECK(s.margin > 0.0);
    }
}

TEST_CASE("growth sandwich holds on a random half-plane sample") {
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> Kd(1.0, 5.0), ab(-5.0, 5.0),
        imd(-50.0, 50.0), xoff(0.0, 100.0);
    for (int it = 0; it < 20000; ++it) {
        const double K = Kd(rng);
        const Parameter p(cplx(ab(rng), ab(rng)));
        const double thr = std::log(1.0 + 2.0 * (p.abs_a + K));
        const cplx z(thr + xoff(rng), imd(rng));
        CHECK(growth_sandwich_holds(z, K, p));
    }
}

TEST_CASE("growth sandwich rejects points left of the valid half-plane") {
    const Parameter p(cplx(-2.0, 0.0));
    CHECK_THROWS_AS(growth_sandwich_holds(cplx(0.0, 0.0), 1.0, p),
                    std::invalid_argument);
}

TEST_CASE("growth sandwich survives double overflow of e^{Re z}") {
    const Parameter p(cplx(-2.0, 0.0));
    for (double x : {700.0, 710.0, 1000.0, 1e6})
        CHECK(growth_sandwich_holds(cplx(x, 3.0), 1.0, p));
}

TEST_CASE("continued growth bound: empty prefix covers zero steps") {
    const Parameter p(cplx(-2.0, 0.0));
    const ContinuedGrowthResult r =
        continued_growth_bound(cplx(10.0, 0.0), 5.0, p, {});
    CHECK(r.certified);
    CHECK(r.n == 0);
    CHECK(r.bound == TowerValue::from_value(8.0));
}

TEST_CASE("continued growth bound on a real escaping orbit") {
    const Parameter p(cplx(-2.0, 0.0));
    const double mu = 5.0;
    const cplx z(10.0, 0.0);
    const std::vector<cplx> prefix{z, p.apply(z)}; // f^0, f^1
    const ContinuedGrowthResult r = continued_growth_bound(z, mu, p, prefix);
    REQUIRE(r.certified);
    CHECK(r.n == 2);
    // Bound F^2(8) must undercut the actual magnitude |f^2(z)|:
    // log|f^2| = f^1 + log(1 - 2 e^{-f^1}) on the real axis.
    const double actual_log =
        prefix[1].real() + std::log1p(-2.0 * std::exp(-prefix[1].real()));
    CHECK(r.bound.log() <= TowerValue::from_value(actual_log));
}

TEST_CASE("continued growth bound rejects side-condition violations") {
    const Parameter p(cplx(-2.0, 0.0));
    // Big imaginary part at step 0 violates |Im f^0| <= F^0(mu) = mu.
    const cplx z(10.0, 50.0);
    const ContinuedGrowthResult r = continued_growth_bound(z, 5.0, p, {z});
    CHECK_FALSE(r.certified);
    CHECK(r.reject_index == 0);
}

TEST_CASE("continued growth bound validates the supplied prefix") {
    const Parameter p(cplx(-2.0, 0.0));
    const cplx z(10.0, 0.0);
    std::vector<cplx> bogus{z, cplx(123.0, 0.0)};
    CHECK_THROWS(continued_growth_bound(z, 5.0, p, bogus));
}
