#include <cmath>

#include "doctest.h"
#include "fracrecon/error.hpp"
#include "fracrecon/regression.hpp"
#include "fracrecon/scenario.hpp"
#include "fracrecon/specfun.hpp"

using namespace fracrecon;
using namespace fracrecon::specfun;
using doctest::Approx;

TEST_SUITE("regression") {
    TEST_CASE("shifted Jacobi polynomials") {
        for (double x : {0.0, 0.3, 0.8}) CHECK(jacobi_shifted(0, 0.7, x) == 1.0);
        // the expanded monomial form loses about ten digits to cancellation at degree 8
        for (int m = 0; m <= 8; ++m)
            for (double a : {0.3, 0.99}) {
                CHECK(jacobi_shifted(m, a, 1.0) == Approx(1.0).epsilon(1e-9));
                CHECK(jacobi_recurrence(m, a, 1.0) == Approx(1.0).epsilon(1e-14));
                CHECK(jacobi_product_form(m, a, 1.0) == Approx(1.0).epsilon(1e-14));
            }
        for (double x : {0.0, 0.25, 0.9}) CHECK(jacobi_shifted(1, 0.0, x) == Approx(2 * x - 1).epsilon(1e-14));
        for (int m = 0; m <= 8; ++m)
            for (double x : {0.05, 0.5, 0.95}) {
                CHECK(std::fabs(jacobi_shifted(m, 0.6, x) - jacobi_recurrence(m, 0.6, x)) < 1e-9);
                CHECK(std::fabs(jacobi_product_form(m, 0.6, x) - jacobi_recurrence(m, 0.6, x)) < 1e-12);
            }
    }

    TEST_CASE("basis layout") {
        CHECK(build_basis({0.25, 0.5, 0.75}, 5, 0.99, 0.2).size() == 9);
        CHECK(build_basis({}, 0, 0.5, 1.0).size() == 1);
        try {
            build_basis({}, 13, 0.5, 1.0);
            FAIL("degree 13 accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegreeTooHigh);
        }
    }

    TEST_CASE("Gram matrix") {
        const Eigen::MatrixXd H = gram_matrix(build_basis({}, 8, 0.99, 0.2));
        CHECK(H(0, 0) == Approx(98.4034443363457583).epsilon(1e-11));
        for (double a : {0.3, 0.99}) {
            const Eigen::MatrixXd G = gram_matrix(build_basis({}, 8, a, 0.2));
            for (int l = 0; l <= 8; ++l)
                for (int m = 0; m < l; ++m) CHECK(std::fabs(G(l, m)) <= 1e-10 * std::sqrt(G(l, l) * G(m, m)));
        }
        const Eigen::MatrixXd P = gram_matrix(build_basis({0.5}, 0, 0.5, 1.0));
        CHECK(P(0, 0) == Approx(2.0 / 3.0).epsilon(1e-13));
        CHECK((P - P.transpose()).norm() == 0.0);
    }

    TEST_CASE("Tikhonov fit") {
        const Scenario s = builtin("fip_ex82", {0.5, std::nullopt});
        const Observation clean = observe(s, uniform_times(20, 0.01), {NoiseKind::None, 0.0});
        const RegressionModel m = build_basis({0.25, 0.5, 0.75}, 5, 0.99, 0.2);
        const TikhonovFit exact = tikhonov_fit(m, clean, 1e-12);
        CHECK(exact.residual_norm <= 1e-8);
        const TikhonovFit heavy = tikhonov_fit(m, clean, 1e12);
        CHECK(heavy.q.norm() < 1e-6);
        CHECK(std::fabs(heavy.psi_fit.eval(0.1)) < 1e-6);
        const Observation noisy = observe(s, uniform_times(20, 0.01), {NoiseKind::FTN, 0.001});
        const TikhonovFit one = tikhonov_fit(m, noisy, 1.0);
        CHECK(std::isfinite(one.residual_norm));
        CHECK(one.residual_norm >= 0.0);
        const TikhonovProblem prob(m, noisy);
        for (double sigma : {1e-8, 1e-3, 1.0}) {
            const TikhonovFit a = prob.fit(sigma), b = tikhonov_fit(m, noisy, sigma);
            CHECK((a.q - b.q).norm() <= 1e-12 * (1 + b.q.norm()));
        }
        // residual decreases as the penalty weakens
        CHECK(prob.fit(1e-10).residual_norm <= prob.fit(1e-2).residual_norm + 1e-15);
    }
}
