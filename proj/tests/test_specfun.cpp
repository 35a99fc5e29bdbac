#include <cmath>

#include "doctest.h"
#include "fracrecon/error.hpp"
#include "fracrecon/specfun.hpp"

using namespace fracrecon;
using namespace fracrecon::specfun;
using doctest::Approx;

TEST_SUITE("specfun") {
    TEST_CASE("gamma at reference points") {
        CHECK(specfun::gamma(1.0) == Approx(1.0).epsilon(1e-15));
        CHECK(specfun::gamma(0.5) == Approx(1.7724538509055160273).epsilon(1e-14));
        CHECK(specfun::gamma(1.4616) == Approx(0.885603194853648036).epsilon(1e-13));
        CHECK(specfun::gamma(5.0) == Approx(24.0).epsilon(1e-14));
        CHECK(specfun::gamma(-2.5) == Approx(-0.945308720482941881).epsilon(1e-13));
    }

    TEST_CASE("gamma poles") {
        CHECK_THROWS_AS(specfun::gamma(0.0), Error);
        CHECK_THROWS_AS(specfun::gamma(-3.0), Error);
    }

    TEST_CASE("beta and binomial") {
        CHECK(beta(0.3, 0.7) == Approx(3.88322207745093339).epsilon(1e-13));
        CHECK(binomial(2.5, 1.5) == Approx(2.5).epsilon(1e-13));
        CHECK(binomial(5.0, 2.0) == Approx(10.0).epsilon(1e-13));
    }

    TEST_CASE("minimum of gamma") {
        const GammaMin& g = gamma_min();
        CHECK(std::fabs(g.x_star - 0.461632144968362341) < 1e-8);
        CHECK(g.gamma_at_min == Approx(0.885603194410888700).epsilon(1e-13));
        CHECK(std::fabs(specfun::gamma(1.0 + g.x_star) - g.gamma_at_min) <= 1e-12);
        CHECK(gamma_lower() == g.gamma_at_min);
    }

    TEST_CASE("Mittag-Leffler reference values") {
        CHECK(mittag_leffler(MLParams(1.0, 1.0), 1.0) == Approx(std::exp(1.0)).epsilon(1e-13));
        CHECK(mittag_leffler(MLParams(0.7, 0.3), 0.0) == Approx(1.0 / specfun::gamma(0.3)).epsilon(1e-14));
        CHECK(mittag_leffler(MLParams(0.5, 0.5), -0.25) == Approx(0.371602946615007101).epsilon(1e-12));
        CHECK(mittag_leffler(MLParams(0.6, 0.6), -0.3) == Approx(0.423141190841616688).epsilon(1e-12));
        CHECK(mittag_leffler(MLParams(0.5, 1.5), -0.5) == Approx(0.768619311614148250).epsilon(1e-12));
        CHECK(mittag_leffler(MLParams(0.8, 0.9), -2.5) == Approx(0.101965820655645767).epsilon(1e-10));
        CHECK(mittag_leffler(MLParams(0.3, 1.0), -1.0) == Approx(0.456594408329690671).epsilon(1e-10));
        CHECK(mittag_leffler(MLParams(0.9, 1.0), 3.0) == Approx(32.9218971768508248).epsilon(1e-12));
    }

    TEST_CASE("Mittag-Leffler domain") {
        CHECK_THROWS_AS(mittag_leffler(MLParams(0.5, 1.0), 60.0), Error);
        CHECK_THROWS_AS(MLParams(0.0, 1.0), Error);
    }

    TEST_CASE("Mittag-Leffler upper bound") {
        const MLParams p(0.6, 0.6);
        CHECK(ml_upper_bound(p, 0.0) == Approx(1.0 / gamma_lower()).epsilon(1e-14));
        CHECK(ml_upper_bound(p, 0.0) == Approx(1.1292).epsilon(1e-4));
        CHECK(ml_upper_bound(p, 0.5) == Approx(2.0 / gamma_lower()).epsilon(1e-14));
        CHECK(mittag_leffler(p, -0.3) <= ml_upper_bound(p, 0.3));
        for (double th1 : {0.2, 0.5, 0.9})
            for (double z = 0.0; z < 0.99; z += 0.07) {
                const MLParams q(th1, th1 + 0.1);
                CHECK(mittag_leffler(q, -z) <= ml_upper_bound(q, z));
            }
    }
}
