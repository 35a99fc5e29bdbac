#include <cmath>

#include "doctest.h"
#include "fracrecon/error.hpp"
#include "fracrecon/scenario.hpp"
#include "fracrecon/specfun.hpp"

using namespace fracrecon;
using namespace fracrecon::specfun;
using doctest::Approx;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::Domain;
}

}  // namespace

TEST_SUITE("scenario") {
    TEST_CASE("built-in scenarios satisfy the operator identity") {
        for (const auto& name : builtin_names())
            for (double nu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const Scenario s = builtin(name, {nu, std::nullopt});
                CHECK(identity_residual(s) <= 1e-8);
            }
        CHECK(code_of([] { builtin("nope"); }) == ErrorCode::UnknownScenario);
    }

    TEST_CASE("fip_ex82 data") {
        const Scenario s = builtin("fip_ex82", {0.5, std::nullopt});
        CHECK(s.data.psi0 == Approx(1.0 / 15.0).epsilon(1e-15));
        CHECK(c_nu(s.data, s.psi_exact).at_zero() == Approx(specfun::gamma(1.5) / 2.0).epsilon(1e-12));
        CHECK(s.data.kind == ProblemKind::FIP);
        CHECK(s.truth.second == Approx(0.5 / 3.0));
    }

    TEST_CASE("ex74 data") {
        const Scenario s = builtin("ex74", {0.5, std::nullopt});
        CHECK(s.psi_exact.eval(0.0) == Approx(512.0 / 225.0).epsilon(1e-14));
    }

    TEST_CASE("noise profiles") {
        CHECK(noise_value(NoiseKind::FTN, 0.001, 0.5, 0.01) == Approx(0.001 * 0.01 * std::log(100.0)).epsilon(1e-14));
        CHECK(noise_value(NoiseKind::FTN, 0.001, 0.5, 0.01) == Approx(4.60517e-5).epsilon(1e-6));
        CHECK(noise_value(NoiseKind::STN, 0.01, 0.5, 0.04) == Approx(0.002).epsilon(1e-14));
        CHECK(noise_value(NoiseKind::None, 0.3, 0.5, 0.5) == 0.0);
        CHECK(noise_from_string("TTN") == NoiseKind::TTN);
        CHECK(code_of([] { noise_from_string("pink"); }) == ErrorCode::Parse);
    }

    TEST_CASE("observations") {
        const Scenario s = builtin("fip_ex82", {0.5, std::nullopt});
        const auto times = uniform_times(20, 0.01);
        REQUIRE(times.size() == 20);
        CHECK(times.front() == Approx(0.01));
        CHECK(times.back() == Approx(0.2));
        const Observation clean = observe(s, times, {NoiseKind::None, 0.0});
        for (std::size_t k = 0; k < times.size(); ++k) CHECK(clean.values[k] == s.psi_exact.eval(times[k]));
        const Observation noisy = observe(s, times, {NoiseKind::FTN, 0.001});
        CHECK(noisy.values[0] == Approx(1.0 / 15.0 + 0.1 + 4.605170185988091e-5).epsilon(1e-14));
        CHECK_THROWS_AS(observe(s, {}, {NoiseKind::None, 0.0}), Error);
    }

    TEST_CASE("observation CSV round trip") {
        const Scenario s = builtin("sip_ex83", {0.4, std::nullopt});
        const Observation o = observe(s, uniform_times(20, 0.01), {NoiseKind::STN, 0.01});
        const Observation back = observation_from_csv("# manifest=x.json\n" + observation_to_csv(o));
        CHECK(back.values == o.values);
        CHECK(back.times == o.times);
        CHECK(back.psi0 == o.psi0);
        CHECK(back.noise.kind == NoiseKind::STN);
        CHECK(code_of([] { observation_from_csv("t,psi_delta\n0.1,1\n"); }) == ErrorCode::Parse);
    }

    TEST_CASE("scenario config round trip and load-time checks") {
        for (const auto& name : builtin_names()) {
            const Scenario s = builtin(name);
            const Scenario back = load_scenario(serialize(s).dump());
            CHECK(serialize(back) == serialize(s));
        }
        nlohmann::json j = serialize(builtin("fip_ex82"));
        nlohmann::json zero = j;
        zero["fdo"][0]["coeff"] = nlohmann::json::array({{{"c", 1.0}, {"p", 1.0}}});
        CHECK(code_of([&] { load_scenario(zero.dump()); }) == ErrorCode::InvariantViolation);
        nlohmann::json bent = j;
        bent["psi"]["series"][1]["c"] = bent["psi"]["series"][1]["c"].get<double>() + 1e-3;
        try {
            load_scenario(bent.dump());
            FAIL("perturbed scenario accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvariantViolation);
            CHECK(std::string(e.what()).find("residual") != std::string::npos);
        }
        CHECK(code_of([] { load_scenario("{not json"); }) == ErrorCode::Parse);
    }
}
