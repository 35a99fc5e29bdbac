#include <cmath>

#include "doctest.h"
#include "fracrecon/bounds.hpp"
#include "fracrecon/error.hpp"
#include "fracrecon/specfun.hpp"

using namespace fracrecon;
using namespace fracrecon::specfun;
using namespace fracrecon::bounds;
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

double term(const Horizon& h, const std::string& name) {
    for (const auto& [n, v] : h.terms)
        if (n == name) return v;
    FAIL("missing term " << name);
    return 0.0;
}

}  // namespace

TEST_SUITE("bounds") {
    TEST_CASE("constants ledger provenance") {
        ConstantsLedger l;
        l.supply("C0", 2.0);
        l.estimate("C0", 5.0);
        l.derive("C0", 6.0);
        CHECK(l.get("C0") == 2.0);
        CHECK(l.provenance("C0") == Provenance::Supplied);
        l.set_default("C1", 1.0);
        CHECK(l.provenance("C1") == Provenance::Default);
        CHECK(l.warnings().size() == 1);
        CHECK(code_of([&] { l.get("C9"); }) == ErrorCode::MissingConstant);
        CHECK(code_of([&] { l.supply("C2", -1.0); }) == ErrorCode::InvariantViolation);
        const ConstantsLedger back = ledger_from_json(nlohmann::json{{"C0", 2.0}, {"R", {{"value", 3.0}}}});
        CHECK(back.get("R") == 3.0);
        CHECK(code_of([] { ledger_from_json(nlohmann::json{{"C0", "x"}}); }) == ErrorCode::Parse);
    }

    TEST_CASE("T_I0") {
        const double c = specfun::gamma(1.5) / 2.0;
        const Horizon h = t_i0(0.5, FdoType::I, 0.5, c, 0.2);
        CHECK(*h.value == Approx(0.0625).epsilon(1e-12));
        CHECK(term(h, "rho_over_c") == Approx(0.37950).epsilon(1e-4));
        CHECK(term(h, "c_over_rho") == Approx(0.99717).epsilon(1e-4));
        CHECK(h.argmin == "one_minus_eps");
        CHECK(*t_i0(0.999, FdoType::I, 0.5, c, 0.2).value == Approx(std::pow(0.001, 2.0 / 0.999)).epsilon(1e-12));
        CHECK(*t_i0(0.999, FdoType::I, 0.5, c, 0.2).value < *t_i0(0.99, FdoType::I, 0.5, c, 0.2).value);
        const Horizon two = t_i0(0.3, FdoType::II, 0.5, 1.0, 0.9);
        CHECK(term(two, "gamma_c") == Approx(std::pow(gamma_lower(), 2.0 / 0.3)).epsilon(1e-12));
        CHECK(term(two, "c_over_gamma") == Approx(term(two, "gamma_c")).epsilon(1e-14));
        CHECK(code_of([&] { t_i0(1.2, FdoType::I, 0.5, c, 0.2); }) == ErrorCode::Domain);
        CHECK(code_of([&] { t_i0(0.5, FdoType::I, 0.5, 0.0, 0.2); }) != ErrorCode::Pole);
    }

    TEST_CASE("T_K") {
        CHECK(t_k(FracPowerSeries({{1.0, 0.0}, {1.0, 1.0}}), 0.2) == 0.2);
        CHECK(t_k(FracPowerSeries({{1.0, 0.0}, {-4.0, 1.0}}), 0.5) == Approx(0.25).epsilon(1e-10));
        CHECK(t_k(FracPowerSeries::constant(-1.0), 0.3) == 0.3);
        CHECK(code_of([] { t_k(FracPowerSeries::monomial(1.0, 1.0), 0.3); }) == ErrorCode::KernelVanishesAtZero);
    }

    TEST_CASE("C4") {
        ConstantsLedger l;
        l.supply("C0", 1.5);
        const FdoSpec one({{0.5, FracPowerSeries::constant(0.5), Placement::Outside}});
        CHECK(c4(l, one) == Approx(1.5 / gamma_lower()).epsilon(1e-14));
        const Scenario s = builtin("fip_ex82", {0.5, std::nullopt});
        const double G = gamma_lower();
        CHECK(c4(l, s.data.fdo) == Approx(1.5 / G * (1.0 + 2.0 * (0.25 + 0.25) / (0.5 * G))).epsilon(1e-12));
        const FdoSpec inside({{0.5, FracPowerSeries::constant(0.5), Placement::Inside},
                              {0.2, FracPowerSeries::constant(0.1), Placement::Inside}});
        ConstantsLedger z;
        z.supply("C0", 1.0);
        z.supply("C1", 1.0);
        z.supply("C2", 1.0);
        z.supply("rho1", 0.0);
        z.supply("rho2", 0.0);
        CHECK(code_of([&] { c4(z, inside); }) == ErrorCode::MissingConstant);
    }

    TEST_CASE("n*") {
        CHECK(find_n_star(1.0, 0.5) == 1);
        CHECK(find_n_star(1.0, -1.0) == 2);
        CHECK(find_n_star(3.0, -1.0) == 1);
        CHECK(find_n_star(builtin("fip_ex82", {0.5, std::nullopt})) == 1);
        CHECK(code_of([] { find_n_star(0.0, 0.0); }) == ErrorCode::NotFound);
    }

    TEST_CASE("nu_0 and T_I structure") {
        const Scenario s = builtin("fip_ex82", {0.6, std::nullopt});
        CHECK(nu_zero(s.data.fdo, 3, 0.5) == Approx(0.5 * s.data.fdo.term(1).order / 2.0));
        const BoundsConfig cfg;
        ConstantsLedger l = default_ledger(s, cfg);
        complete_ledger(l, s, cfg);
        double prev = 0.0;
        for (double e : {0.05, 0.1, 0.2, 0.4, 0.6}) {
            const Horizon h = t_i(e, l, s, cfg);
            REQUIRE(h.value);
            CHECK(*h.value >= prev);
            CHECK(*h.value <= term(h, "T_I0"));
            prev = *h.value;
        }
        const Scenario q = builtin("sip_ex83", {0.6, std::nullopt});
        ConstantsLedger lq = default_ledger(q, cfg);
        complete_ledger(lq, q, cfg);
        const Horizon hq = t_i(0.1, lq, q, cfg);
        CHECK(*hq.value <= std::min(term(hq, "T_I0"), term(hq, "T_K")));
    }

    TEST_CASE("T_II") {
        const Scenario s = builtin("fip_ex82", {0.5, std::nullopt});
        BoundsConfig cfg;
        ConstantsLedger l = default_ledger(s, cfg);
        complete_ledger(l, s, cfg);
        double prev = 1.0;
        for (double e : {5e-3, 1e-4, 1e-6, 1e-8}) {
            cfg.eps = e;
            const HorizonPair h = t_ii(0.9, l, s, cfg);
            REQUIRE(h.known_nu1.value);
            CHECK(*h.known_nu1.value <= prev);
            prev = *h.known_nu1.value;
        }
        CHECK(prev < 1e-10);
        // exact data has nu_{1,a} = nu_1, so the general form is not applicable
        cfg.eps = 1e-3;
        const HorizonPair exact = t_ii(0.9, l, s, cfg);
        CHECK_FALSE(exact.general.value);
        CHECK(exact.general.absent_reason.find("HypothesisViolated") != std::string::npos);
        cfg.nu1a = 0.45;
        const HorizonPair forced = t_ii(0.9, l, s, cfg);
        REQUIRE(forced.general.value);
        const Horizon t0 = t_i0(cfg.eps_I, FdoType::I, 0.5, specfun::gamma(1.5) / 2.0, cfg.t_star);
        CHECK(*forced.general.value <= std::min(cfg.t_star, *t0.value));
    }

    TEST_CASE("T_III") {
        const Scenario s = builtin("sip_ex83", {0.5, std::nullopt});
        BoundsConfig cfg;
        ConstantsLedger l = default_ledger(s, cfg);
        complete_ledger(l, s, cfg);
        const HorizonPair h = t_iii(0.9, l, s, cfg);
        REQUIRE(h.known_nu1.value);
        CHECK(*h.known_nu1.value <= cfg.t_star);
        cfg.gamma_bar = 0.3;
        const HorizonPair low = t_iii(0.5, l, s, cfg);
        CHECK(low.general.absent_reason.find("EpsilonOutOfRange") != std::string::npos);
        cfg.nu1a = 0.45;
        const HorizonPair forced = t_iii(0.9, l, s, cfg);
        REQUIRE(forced.general.value);
        CHECK(*forced.general.value <= std::min(term(forced.general, "T_I"), term(forced.general, "T_K")));
        // with nu_1 = 0.1 the kernel exponent is 2 nu_1 / (2 - alpha)
        const Scenario small = builtin("sip_ex83", {0.1, std::nullopt});
        BoundsConfig c2;
        ConstantsLedger l2 = default_ledger(small, c2);
        complete_ledger(l2, small, c2);
        c2.eps = 1e-3;
        const double k1 = term(t_iii(0.9, l2, small, c2).known_nu1, "kernel");
        c2.eps = 5e-4;
        const double k2 = term(t_iii(0.9, l2, small, c2).known_nu1, "kernel");
        CHECK(k2 / k1 == Approx(std::pow(0.5, 1.5 / 0.2)).epsilon(1e-10));
    }

    TEST_CASE("compute_bounds defaults warn and keep T_I below T_I0") {
        const Scenario s = builtin("fip_ex82", {0.5, std::nullopt});
        const BoundsReport r = compute_bounds(s, ConstantsLedger{}, BoundsConfig{});
        CHECK_FALSE(r.warnings.empty());
        CHECK(r.ledger.provenance("C0") == Provenance::Default);
        REQUIRE(r.T_I.value);
        CHECK(*r.T_I.value <= *r.T_I0.value);
        ConstantsLedger sup;
        for (const char* n : {"C0", "C1", "C2", "C5", "R", "R2", "R3"}) sup.supply(n, 1.0);
        const BoundsReport q = compute_bounds(s, sup, BoundsConfig{});
        CHECK(q.ledger.provenance("C0") == Provenance::Supplied);
        const nlohmann::json j = to_json(q);
        CHECK(j.contains("T_II"));
    }

    TEST_CASE("norm estimates") {
        const FracPowerSeries c = FracPowerSeries::constant(0.7);
        CHECK(sampled_seminorm(c, 0.5, 64, 0.2) == 0.0);
        const FracPowerSeries rho3({{0.25, 0.0}, {0.25, 2.0}});
        CHECK(sampled_seminorm(rho3, 1.0, 512, 0.2) == Approx(0.1).epsilon(1e-2));
        CHECK(sampled_seminorm(rho3, 1.0, 256, 0.2) <= sampled_seminorm(rho3, 1.0, 512, 0.2));
        CHECK(sampled_sup(rho3, 128, 0.2) <= sampled_sup(rho3, 256, 0.2));
        CHECK(sampled_sup(rho3, 256, 0.2) == Approx(0.26).epsilon(1e-12));
    }

    TEST_CASE("empirical pre-limit errors") {
        const Scenario s = builtin("fip_ex82", {0.5, std::nullopt});
        const auto grid = log_grid(1e-1, 1e-6, 1);
        REQUIRE(grid.size() == 6);
        const DeltaCurve d1 = empirical_delta(s, 1, grid, 0.99, 0.05);
        for (const auto& p : d1.points)
            if (p.t_a <= 1e-3) CHECK(p.delta < 0.05);
        const Scenario q = builtin("sip_ex83", {0.5, std::nullopt});
        const DeltaCurve d3 = empirical_delta(q, 3, grid, 0.01, 0.1);
        for (std::size_t k = 1; k < d3.points.size(); ++k) CHECK(d3.points[k].delta < d3.points[k - 1].delta);
        CHECK(code_of([&] { empirical_delta(q, 2, grid, 0.99, 0.1); }) == ErrorCode::WrongBranch);
        const DeltaCurve bad = empirical_delta(s, 1, {1.0, 0.1}, 0.99, 0.05);
        CHECK_FALSE(bad.points[0].valid);
        CHECK(delta_to_csv(d3).rfind("t_a,delta,valid", 0) == 0);
    }
}
