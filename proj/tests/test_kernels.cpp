#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fracrecon/kernels.hpp"

using namespace fracrecon::kernels;

TEST_SUITE("kernels") {
    TEST_CASE("avx2 and scalar agree") {
        if (!avx2_available()) {
            MESSAGE("AVX2 not available; only the scalar path is exercised");
            return;
        }
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 100u, 1023u}) {
            std::vector<double> a(n), b(n);
            double mag = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = u(rng);
                b[i] = u(rng);
                mag += std::fabs(a[i] * b[i]) + std::fabs(a[i]);
            }
            CHECK(std::fabs(dot_avx2(a.data(), b.data(), n) - dot_scalar(a.data(), b.data(), n)) <= 1e-14 * (1 + mag));
            CHECK(std::fabs(sum_avx2(a.data(), n) - sum_scalar(a.data(), n)) <= 1e-14 * (1 + mag));
        }
    }

    TEST_CASE("dispatch switches backends") {
        const Backend before = active_backend();
        const std::vector<double> a{1, 2, 3, 4, 5}, b{5, 4, 3, 2, 1};
        REQUIRE(set_backend(Backend::Scalar));
        CHECK(active_backend() == Backend::Scalar);
        CHECK(dot(a.data(), b.data(), a.size()) == 35.0);
        CHECK(sum(a.data(), a.size()) == 15.0);
        CHECK(set_backend(Backend::Avx2) == avx2_available());
        CHECK(dot(a.data(), b.data(), a.size()) == 35.0);
        set_backend(before);
        CHECK(backend_name(Backend::Scalar) == "scalar");
    }
}
