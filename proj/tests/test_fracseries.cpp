#include <cmath>

#include "doctest.h"
#include "fracrecon/error.hpp"
#include "fracrecon/fracseries.hpp"
#include "fracrecon/specfun.hpp"

using namespace fracrecon;
using namespace fracrecon::specfun;
using doctest::Approx;

TEST_SUITE("fracseries") {
    TEST_CASE("evaluation") {
        CHECK(FracPowerSeries({{1.0 / 15.0, 0.0}, {1.0, 0.5}}).eval(0.0) == Approx(1.0 / 15.0));
        CHECK(FracPowerSeries({{1.0, -0.5}}).eval(0.25) == Approx(2.0));
        CHECK(FracPowerSeries({{2.0, 0.3}, {-1.0, 1.0}}).eval(1.0) == Approx(1.0));
        CHECK_THROWS_AS(FracPowerSeries({{1.0, -0.5}}).eval(0.0), Error);
    }

    TEST_CASE("construction merges equal exponents and drops zeros") {
        const FracPowerSeries s({{1.0, 0.5}, {2.0, 0.0}, {-1.0, 0.5}, {3.0, 0.5}});
        REQUIRE(s.size() == 2);
        CHECK(s.terms()[0].p == 0.0);
        CHECK(s.coeff_of(0.5) == Approx(3.0));
        CHECK(s.min_exponent() == 0.0);
    }

    TEST_CASE("caputo") {
        CHECK(caputo(FracPowerSeries::constant(3.0), 0.4).empty());
        const FracPowerSeries d = caputo(FracPowerSeries::monomial(1.0, 1.0), 0.5);
        REQUIRE(d.size() == 1);
        CHECK(d.terms()[0].p == Approx(0.5));
        CHECK(d.terms()[0].c == Approx(1.1283791670955126).epsilon(1e-14));
        for (double nu : {0.1, 0.5, 0.9}) {
            const FracPowerSeries e = caputo(FracPowerSeries::monomial(1.0, nu), nu);
            REQUIRE(e.size() == 1);
            CHECK(e.terms()[0].p == Approx(0.0));
            CHECK(e.terms()[0].c == Approx(specfun::gamma(1.0 + nu)).epsilon(1e-14));
        }
    }

    TEST_CASE("multiply") {
        const FracPowerSeries a({{1.0, 0.0}, {1.0, 2.0}});
        CHECK(multiply(a, FracPowerSeries()).empty());
        CHECK(multiply(a, FracPowerSeries::monomial(1.0, 0.3)) == FracPowerSeries({{1.0, 0.3}, {1.0, 2.3}}));
        const FracPowerSeries rho({{0.25, 0.0}, {0.25, 2.0}});
        const FracPowerSeries u({{1.0 / 15.0, 0.0}, {1.0, 0.5}});
        const FracPowerSeries p = rho * u;
        CHECK(p.size() == 4);
        for (double t : {0.01, 0.3, 0.9}) CHECK(p.eval(t) == Approx(rho.eval(t) * u.eval(t)).epsilon(1e-14));
    }

    TEST_CASE("singular convolution") {
        CHECK(convolve_singular(0.9, FracPowerSeries(), FracPowerSeries::monomial(1.0, 0.5)).empty());
        const FracPowerSeries c = convolve_singular(0.9, FracPowerSeries::constant(1.0), FracPowerSeries::monomial(1.0, 0.5));
        REQUIRE(c.size() == 1);
        CHECK(c.terms()[0].p == Approx(0.6));
        CHECK(c.terms()[0].c == Approx(9.43590581267979412).epsilon(1e-12));
        const FracPowerSeries k = convolve_singular(0.9, FracPowerSeries({{1.0, 0.0}, {1.0, 1.0}}), FracPowerSeries::constant(1.0));
        REQUIRE(k.size() == 2);
        CHECK(k.coeff_of(0.1) == Approx(10.0).epsilon(1e-12));
        CHECK(k.coeff_of(1.1) == Approx(1.0 / 1.1).epsilon(1e-12));
    }

    TEST_CASE("fractional operator") {
        const FdoSpec op({{0.5, FracPowerSeries::constant(0.5), Placement::Outside}});
        const FracPowerSeries psi({{1.0 / 15.0, 0.0}, {1.0, 0.5}});
        const FracPowerSeries r = apply_fdo(op, psi);
        REQUIRE(r.size() == 1);
        CHECK(r.coeff_of(0.0) == Approx(0.443113462726379007).epsilon(1e-14));
        CHECK(apply_fdo(op, FracPowerSeries::constant(2.0)).empty());
        const FdoSpec inside({{0.5, FracPowerSeries({{1.0, 0.0}, {1.0, 1.0}}), Placement::Inside}});
        const FracPowerSeries expect = caputo(FracPowerSeries({{1.0 / 15.0, 0.0}, {1.0, 0.5}, {1.0 / 15.0, 1.0}, {1.0, 1.5}}), 0.5);
        CHECK(apply_fdo(inside, psi) == expect);
    }

    TEST_CASE("J_mu") {
        CHECK(j_mu(FracPowerSeries::constant(1.0), 0.3, 0.5) == 0.0);
        const double mu = 0.3;
        const FracPowerSeries s = FracPowerSeries::monomial(1.0, 2.0 * mu);
        for (double t : {0.05, 0.4, 0.9})
            CHECK(j_mu(s, mu, t) == Approx(2.99156898768759077 * std::pow(t, 2.0 * mu)).epsilon(1e-12));
        CHECK(std::fabs(j_mu(s, mu, 1e-12)) < 1e-6);
    }

    TEST_CASE("json round trip") {
        const FracPowerSeries s({{0.25, 0.0}, {-1.5, 0.75}, {2.0, 3.0}});
        CHECK(series_from_json(to_json(s)) == s);
        const FdoSpec op({{0.5, FracPowerSeries::constant(0.5), Placement::Outside},
                          {0.2, s, Placement::Inside}});
        const FdoSpec back = fdo_from_json(to_json(op));
        REQUIRE(back.size() == 2);
        CHECK(back.term(1).coeff == s);
        CHECK(back.term(1).placement == Placement::Inside);
    }

    TEST_CASE("analytic norm bounds") {
        const FracPowerSeries s({{1.0, 0.0}, {-2.0, 0.5}, {0.5, 2.0}});
        CHECK(sup_norm_bound(s, 0.25) == Approx(1.0 + 2.0 * 0.5 + 0.5 * 0.0625));
        for (double t = 0.0; t <= 0.25; t += 0.01) CHECK(std::fabs(s.eval(t)) <= sup_norm_bound(s, 0.25));
        CHECK(std::isinf(holder_seminorm_bound(s, 0.7, 0.25)));
        const double h = holder_seminorm_bound(s, 0.4, 0.25);
        for (double a = 0.0; a < 0.25; a += 0.013)
            for (double b = a + 0.007; b <= 0.25; b += 0.017)
                CHECK(std::fabs(s.eval(b) - s.eval(a)) <= h * std::pow(b - a, 0.4) * (1 + 1e-12));
    }
}
