#include <cmath>

#include "doctest.h"
#include "fracrecon/error.hpp"
#include "fracrecon/reconstruct.hpp"
#include "fracrecon/scenario.hpp"

using namespace fracrecon;
using doctest::Approx;

TEST_SUITE("reconstruct") {
    TEST_CASE("leading order from exact data") {
        const Scenario s = builtin("fip_ex82", {0.5, std::nullopt});
        const EstimatorInput inp{&s.data, s.psi_exact, s.data.psi0};
        for (double t : {0.1, 1e-3, 1e-6}) CHECK(nu1_estimate(inp, t) == Approx(0.5).epsilon(1e-12));
        CHECK_THROWS_AS(nu1_estimate(inp, 1.0), Error);
    }

    TEST_CASE("ex74 closed form") {
        const Scenario s = builtin("ex74", {0.5, std::nullopt});
        const EstimatorInput inp{&s.data, s.psi_exact, s.data.psi0};
        CHECK(nu1_estimate(inp, 1e-4) == Approx(0.485985638199878231).epsilon(1e-12));
        for (double t : {1e-2, 1e-5, 1e-9})
            CHECK(nu1_estimate(inp, t) == Approx(0.5 + std::log(256.0 / 225.0) / std::log(t)).epsilon(1e-12));
    }

    TEST_CASE("pre-limit pair approaches the truth") {
        const Scenario s = builtin("fip_ex82", {0.5, std::nullopt});
        double prev = 1.0;
        for (double t : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
            const ParamPair p = prelimit_exact(s, t, 0.99);
            CHECK(p.nu1 == Approx(0.5).epsilon(1e-12));
            const double err = std::fabs(p.second - 0.5 / 3.0);
            CHECK(err <= prev + 1e-12);
            prev = err;
        }
        CHECK(prev < 1e-3);
        CHECK_THROWS_AS(prelimit_exact(s, 1.0, 0.99), Error);
    }

    TEST_CASE("F_nu has the predicted leading power") {
        const Scenario s = builtin("fip_ex82", {0.5, std::nullopt});
        const AuxAssembler aux(s.data, s.psi_exact);
        const double g3 = 0.5 - 0.5 / 3.0;
        const double a = aux.f_nu(0.5, 1e-8) / std::pow(1e-8, g3), b = aux.f_nu(0.5, 1e-10) / std::pow(1e-10, g3);
        CHECK(a != 0.0);
        CHECK(a == Approx(b).epsilon(1e-2));
    }

    TEST_CASE("F_nu of a constant observation") {
        const Scenario s = builtin("fip_ex82", {0.5, std::nullopt});
        const FracPowerSeries flat = FracPowerSeries::constant(s.data.psi0);
        const AuxAssembler aux(s.data, flat);
        const EstimatorInput inp{&s.data, flat, s.data.psi0};
        for (double t : {0.01, 0.1}) CHECK(f_nu(inp, 0.5, t) == Approx(aux.f_nu(0.5, t)));
        CHECK(std::isfinite(aux.f_nu(0.5, 0.05)));
    }

    TEST_CASE("F_gamma") {
        const Scenario s = builtin("sip_ex83", {0.5, std::nullopt});
        const AuxAssembler aux(s.data, s.psi_exact);
        const double g = *s.data.kernel_gamma;
        const double c10 = -(s.data.b0 * s.psi_exact).at_zero();
        const double limit = s.data.K0.at_zero() * c10 / (1.0 - g);
        CHECK(aux.f_gamma(0.5, 1e-10) / std::pow(1e-10, 1.0 - g) == Approx(limit).epsilon(1e-3));

        ProblemData d = s.data;
        d.G = d.G + convolve_singular(g, d.K0, d.b0 * s.psi_exact);
        d.b0 = FracPowerSeries();
        d.delta_flag = 0;
        const AuxAssembler flat(d, s.psi_exact);
        for (double t : {0.01, 0.1, 0.2}) CHECK(std::fabs(flat.f_gamma(0.5, t)) < 1e-10);
    }

    TEST_CASE("second estimate on exact data converges to gamma") {
        const Scenario s = builtin("sip_ex83", {0.5, std::nullopt});
        const EstimatorInput inp{&s.data, s.psi_exact, s.data.psi0};
        const double first = std::fabs(second_estimate(inp, 0.5, 1e-1, 0.01) - 0.9);
        double prev = first;
        for (double t : {1e-3, 1e-5, 1e-7}) {
            const double err = std::fabs(second_estimate(inp, 0.5, t, 0.01) - 0.9);
            CHECK(err < prev);
            prev = err;
        }
        CHECK(prev < 0.1 * first);
    }
}
