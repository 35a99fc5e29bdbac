#include <cmath>

#include "doctest.h"
#include "fracrecon/error.hpp"
#include "fracrecon/pipeline.hpp"

using namespace fracrecon;
using doctest::Approx;

namespace {

QuasiOptConfig small(int K1, int K2) {
    QuasiOptConfig c;
    c.K1 = K1;
    c.K2 = K2;
    return c;
}

}  // namespace

TEST_SUITE("quasiopt") {
    TEST_CASE("weighted norm") {
        CHECK(weighted_norm(0.0, 0.0, 10.0) == 0.0);
        CHECK(weighted_norm(0.01, 0.02, 10.0) == Approx(0.101980390271855696).epsilon(1e-14));
        CHECK(weighted_norm(-0.3, 0.0, 7.0) == Approx(2.1).epsilon(1e-14));
    }

    TEST_CASE("geometric grids") {
        const QuasiOptConfig c = small(50, 20);
        CHECK(c.sigma(0) == 1.0);
        CHECK(c.sigma(3) == Approx(0.125));
        CHECK(c.tbar(2) == Approx(0.05));
        QuasiOptConfig bad = c;
        bad.xi1 = 1.5;
        CHECK_THROWS_AS(bad.validate(), Error);
    }

    TEST_CASE("ties pick the first difference") {
        const QuasiOptConfig c = small(5, 3);
        CandidateGrid g(5, 3);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 3; ++j) g.at(i, j) = {true, {0.5 + 0.01 * j, 0.2, ProblemKind::FIP}, ""};
        const Selection s = select(g, c);
        for (const auto& ij : s.i_j) {
            REQUIRE(ij.has_value());
            CHECK(*ij == 1);
        }
    }

    TEST_CASE("a single usable column is forced") {
        const QuasiOptConfig c = small(2, 3);
        CandidateGrid g(2, 3);
        g.at(0, 1) = {true, {0.4, 0.1, ProblemKind::FIP}, ""};
        g.at(1, 1) = {true, {0.45, 0.12, ProblemKind::FIP}, ""};
        g.at(0, 0).reason = "RatioDegenerate";
        const Selection s = select(g, c);
        CHECK(s.j0 == 1);
        CHECK(s.excluded_columns == 2);
        CHECK(s.final.nu1 == Approx(s.i0 == 0 ? 0.4 : 0.45));
        CHECK(g.invalid_count() == 4);
    }

    TEST_CASE("no valid candidates") {
        CandidateGrid g(3, 2);
        try {
            select(g, small(3, 2));
            FAIL("empty grid accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NoValidCandidates);
        }
    }

    TEST_CASE("published cells") {
        const PipelineSettings p;
        const auto fip = run_table(ProblemKind::FIP, 0.001, {NoiseKind::FTN}, {0.5}, p);
        REQUIRE(fip[0].result);
        CHECK(std::round(fip[0].result->pair.nu1 * 1e4) / 1e4 == Approx(0.5));
        CHECK(std::round(fip[0].result->pair.second * 1e4) / 1e4 == Approx(0.1681));
        const auto sip = run_table(ProblemKind::SIP, 0.001, {NoiseKind::STN, NoiseKind::FTN}, {0.9}, p);
        CHECK(std::round(sip[0].result->pair.nu1 * 1e4) / 1e4 == Approx(0.8991));
        CHECK(std::round(sip[0].result->pair.second * 1e4) / 1e4 == Approx(0.8970));
        CHECK(std::round(sip[1].result->pair.second * 1e4) / 1e4 == Approx(0.8970));
        const auto clean = run_table(ProblemKind::FIP, 0.0, {NoiseKind::None}, {0.5}, p);
        CHECK(std::fabs(clean[0].result->pair.nu1 - 0.5) < 1e-3);
    }

    TEST_CASE("worker count does not change the result") {
        PipelineSettings a, b;
        a.workers = 1;
        b.workers = 4;
        const Scenario s = builtin("sip_ex83", {0.4, std::nullopt});
        const Observation o = observe(s, uniform_times(20, 0.01), {NoiseKind::TTN, 0.01});
        CandidateGrid ga(50, 20), gb(50, 20);
        const ReconstructionResult ra = run_pipeline(s, o, a, &ga), rb = run_pipeline(s, o, b, &gb);
        CHECK(ra.pair.nu1 == rb.pair.nu1);
        CHECK(ra.pair.second == rb.pair.second);
        CHECK(grid_to_csv(ga, a.quasiopt(ProblemKind::SIP)) == grid_to_csv(gb, b.quasiopt(ProblemKind::SIP)));
    }

    TEST_CASE("observation must match the scenario") {
        const Scenario s = builtin("fip_ex82", {0.5, std::nullopt});
        Observation o = observe(s, uniform_times(20, 0.01), {NoiseKind::FTN, 0.001});
        o.psi0 += 1e-9;
        try {
            run_pipeline(s, o, PipelineSettings{});
            FAIL("mismatch accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InputMismatch);
        }
    }

    TEST_CASE("file round trip gives the same reconstruction") {
        const Scenario s = builtin("fip_ex82", {0.3, std::nullopt});
        const Observation o = observe(s, uniform_times(20, 0.01), {NoiseKind::STN, 0.001});
        const Observation back = observation_from_csv(observation_to_csv(o));
        const PipelineSettings p;
        CHECK(run_pipeline(s, o, p).pair.nu1 == run_pipeline(s, back, p).pair.nu1);
        const auto cell = run_table(ProblemKind::FIP, 0.001, {NoiseKind::STN}, {0.3}, p);
        CHECK(cell[0].result->pair.second == run_pipeline(s, back, p).pair.second);
    }
}
