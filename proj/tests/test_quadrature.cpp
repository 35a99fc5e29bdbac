#include <cmath>

#include "doctest.h"
#include "fracrecon/quadrature.hpp"
#include "fracrecon/specfun.hpp"

using namespace fracrecon;
using namespace fracrecon::oracle;
using namespace fracrecon::specfun;
using doctest::Approx;

TEST_SUITE("quadrature") {
    TEST_CASE("Gauss-Legendre is exact for polynomials of degree 2n-1") {
        const RulePtr r = gauss_legendre(6);
        CHECK(integrate(*r, 0.0, 2.0, [](double x) { return std::pow(x, 11); }) == Approx(std::pow(2.0, 12) / 12).epsilon(1e-13));
        CHECK(integrate(*r, 0.0, 1.0, [](double x) { return std::cos(x); }) == Approx(std::sin(1.0)).epsilon(1e-12));
    }

    TEST_CASE("Gauss-Jacobi absorbs the endpoint singularity") {
        const RulePtr r = gauss_jacobi(12, -0.7);
        REQUIRE(r->kind == QuadKind::GaussJacobi);
        double wsum = 0.0;
        for (double w : r->weights) wsum += w;
        CHECK(wsum > 0.0);
        const double v = integrate(*r, 0.0, 1.0, [](double x) { return x * x; });
        CHECK(v == Approx(beta(0.3, 3.0)).epsilon(1e-12));
    }
}
