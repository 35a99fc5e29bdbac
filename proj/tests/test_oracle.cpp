#include <cmath>

#include "doctest.h"
#include "fracrecon/error.hpp"
#include "fracrecon/oracle.hpp"
#include "fracrecon/reconstruct.hpp"
#include "fracrecon/scenario.hpp"
#include "fracrecon/specfun.hpp"

using namespace fracrecon;
using namespace fracrecon::specfun;
using namespace fracrecon::oracle;
using doctest::Approx;

TEST_SUITE("oracle") {
    TEST_CASE("Caputo quadrature") {
        CHECK(std::fabs(caputo_quadrature([](double) { return 2.0; }, 0.4, 0.7)) < 1e-12);
        CHECK(caputo_quadrature([](double t) { return t; }, 0.5, 1.0) == Approx(1.12837916709551257).epsilon(1e-8));
        CHECK(caputo_quadrature([](double t) { return std::sqrt(t); }, 0.5, 0.3) ==
              Approx(0.886226925452758014).epsilon(1e-8));
        CHECK_THROWS_AS(caputo_quadrature([](double t) { return t; }, 1.5, 0.5), Error);
    }

    TEST_CASE("convolution quadrature") {
        const double v = convolution_quadrature([](double) { return 1.0; }, [](double s) { return std::sqrt(s); }, 0.9, 1.0);
        CHECK(v == Approx(9.43590581267979412).epsilon(1e-8));
    }

    TEST_CASE("Mittag-Leffler average") {
        const Fn one = [](double) { return 1.0; };
        CHECK(g_script(one, 0.5, 3.0, 0.0) == Approx(3.0 / specfun::gamma(1.5)).epsilon(1e-14));
        CHECK(g_script([](double) { return 0.0; }, 0.5, 1.0, 0.4) == 0.0);
        CHECK(g_script(one, 0.5, 1.0, 0.25) == Approx(0.768619311614148250).epsilon(1e-9));
        CHECK(g_script(one, 0.7, 2.0, 0.9) ==
              Approx(2.0 * mittag_leffler(MLParams(0.7, 1.7), -2.0 * std::pow(0.9, 0.7))).epsilon(1e-9));
    }

    TEST_CASE("kernel average") {
        const Fn one = [](double) { return 1.0; };
        CHECK(g_general(one, one, 0.3, 0.0) == Approx(1.0 / 0.3));
        CHECK(g_general(one, one, 0.3, 0.6) == Approx(1.0 / 0.3).epsilon(1e-9));
        const Scenario s = builtin("sip_ex83", {0.5, std::nullopt});
        const FracPowerSeries c1 = -(s.data.b0 * s.psi_exact);
        const Fn k = [](double t) { return 1.0 + t; };
        const Fn f = [&](double t) { return c1.eval(t); };
        const double g = *s.data.kernel_gamma;
        const double t = 0.05;
        // with K0 = 1 + t the memory term is a different problem; compare with the analytic convolution instead
        const double expect = convolve_singular(g, FracPowerSeries({{1.0, 0.0}, {1.0, 1.0}}), c1).eval(t) / std::pow(t, 1.0 - g);
        CHECK(g_general(k, f, 1.0 - g, t) == Approx(expect).epsilon(1e-6));
        const AuxAssembler aux(s.data, s.psi_exact);
        CHECK(g_general(one, f, 1.0 - g, t) * std::pow(t, 1.0 - g) == Approx(aux.f_gamma(0.5, t)).epsilon(1e-6));
    }

    TEST_CASE("lemma checks on special inputs") {
        MLAverageInput ml;
        ml.f = FracPowerSeries::constant(2.0);
        ml.eps5 = 0.2;
        ml.eps = 0.5 * (1.0 - std::pow(ml.lambda, ml.eps5));
        const LemmaReport r = check_ml_average(ml);
        CHECK(r.passed);
        CHECK(r.margin >= 0.0);

        KernelAverageInput ka;
        ka.k = FracPowerSeries::constant(1.0);
        ka.f = FracPowerSeries::constant(1.0);
        const LemmaReport rk = check_kernel_average(ka);
        CHECK(rk.passed);
        CHECK(rk.max_lhs < 1e-12);

        LeadingPowerInput lp;
        lp.w0 = 0.0;
        lp.C1 = 1.3;
        lp.theta = 0.4;
        lp.c = 0.0;
        lp.C2 = 0.1;
        const LemmaReport rl = check_leading_power(lp);
        CHECK(rl.passed);
        CHECK(rl.margin >= 0.0);

        LogPerturbationInput bad;
        bad.F = FracPowerSeries::constant(0.5);
        CHECK_THROWS_AS(check_log_perturbation(bad), Error);
    }

    TEST_CASE("order recovery for both operator types") {
        for (bool two : {false, true}) {
            OrderRecoveryInput in;
            in.mu = {0.6, 0.3};
            in.r = {0.5, -0.25};
            in.v = FracPowerSeries({{0.1, 0.0}, {1.0, 0.6}, {0.5, 1.1}});
            in.type_two = two;
            const LemmaReport r = check_order_recovery(in);
            CHECK(r.passed);
            CHECK(r.margin >= 0.0);
            CHECK(to_json(r)["passed"] == true);
        }
    }
}
