#include "fracrecon/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fracrecon/bounds.hpp"
#include "fracrecon/error.hpp"
#include "fracrecon/format.hpp"
#include "fracrecon/oracle.hpp"
#include "fracrecon/reconstruct.hpp"
#include "fracrecon/reference.hpp"
#include "fracrecon/regression.hpp"
#include "fracrecon/scenario.hpp"

namespace fracrecon::verify {

namespace {

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(k) / (n - 1));
    return v;
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

oracle::Fn as_fn(const FracPowerSeries& s) {
    return [s](double t) { return s.eval(t); };
}

std::string summary_of(std::size_t failures, std::size_t total, const std::string& what) {
    std::ostringstream os;
    os << total - failures << "/" << total << " " << what;
    return os.str();
}

}  // namespace

SuiteResult identities(int samples) {
    SuiteResult r{"identities", true, {}, nlohmann::json::object()};
    const std::vector<double> nus{0.1, 0.3, 0.5, 0.7, 0.9};
    const std::vector<double> ts = logspace(1e-3, 0.5, samples);
    double worst_fdo = 0.0, worst_nu = 0.0, worst_gamma = 0.0;
    std::size_t checks = 0, failures = 0;
    nlohmann::json rows = nlohmann::json::array();
    for (const std::string& name : builtin_names())
        for (double nu : nus) {
            const Scenario s = builtin(name, {nu, std::nullopt});
            const double res = identity_residual(s);
            worst_fdo = std::max(worst_fdo, res);
            ++checks;
            if (!(res <= 1e-8)) ++failures;
            nlohmann::json row = {{"scenario", name}, {"nu", nu}, {"fdo_residual", res}};

            const AuxAssembler aux(s.data, s.psi_exact);
            if (s.data.kind == ProblemKind::FIP) {
                const FdoTerm& ti = s.data.fdo.term(s.data.i_star - 1);
                const double nu1 = s.truth.nu1, g3 = nu1 - s.truth.second;
                const FracPowerSeries base =
                    ti.placement == Placement::Outside ? s.psi_exact : multiply(ti.coeff, s.psi_exact);
                const FracPowerSeries d1 = caputo(base, nu1);
                const double n = static_cast<double>(bounds::find_n_star(s));
                const oracle::Fn U = [&](double x) { return d1.eval(x) / n + aux.f_nu(nu1, x); };
                double w = 0.0;
                for (double t : ts) w = std::max(w, rel(std::pow(t, g3) * oracle::g_script(U, g3, n, t), aux.f_nu(nu1, t)));
                row["f_nu_rel"] = w;
                worst_nu = std::max(worst_nu, w);
                ++checks;
                if (!(w <= 1e-6)) ++failures;
            }
            const FracPowerSeries c1 = double(s.data.delta_flag) * s.data.I - multiply(s.data.b0, s.psi_exact);
            if (s.data.kernel_gamma && !c1.empty()) {
                const double g = *s.data.kernel_gamma;
                const oracle::Fn K = as_fn(s.data.K0), C = as_fn(c1);
                double w = 0.0;
                for (double t : ts)
                    w = std::max(w, rel(std::pow(t, 1.0 - g) * oracle::g_general(K, C, 1.0 - g, t),
                                        aux.f_gamma(s.truth.nu1, t)));
                row["f_gamma_rel"] = w;
                worst_gamma = std::max(worst_gamma, w);
                ++checks;
                if (!(w <= 1e-6)) ++failures;
            }
            rows.push_back(row);
        }
    r.passed = failures == 0;
    r.details = {{"rows", rows},
                 {"max_fdo_residual", worst_fdo},
                 {"max_f_nu_rel", worst_nu},
                 {"max_f_gamma_rel", worst_gamma}};
    r.summary = summary_of(failures, checks, "checks") + "; max residual " + shortest(worst_fdo) + ", max F_nu rel " +
                shortest(worst_nu) + ", max F_gamma rel " + shortest(worst_gamma);
    return r;
}

namespace {

FracPowerSeries random_series(std::mt19937_64& rng, double pmin, double pmax, bool constant) {
    std::uniform_int_distribution<int> nterms(1, 4);
    std::uniform_real_distribution<double> coef(0.1, 2.0), expo(pmin, pmax);
    std::vector<Term> ts;
    if (constant) ts.push_back({coef(rng), 0.0});
    const int n = nterms(rng);
    for (int k = 0; k < n; ++k) ts.push_back({coef(rng), expo(rng)});
    return FracPowerSeries(ts);
}

}  // namespace

SuiteResult oracle_equivalence(int cases, std::uint64_t seed) {
    SuiteResult r{"oracle_equivalence", true, {}, nlohmann::json::object()};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_caputo = 0.0, worst_conv = 0.0;
    std::size_t failures = 0, errors = 0;
    for (int c = 0; c < cases; ++c) {
        const double t = 0.01 + 0.99 * unit(rng);
        try {
            if (c % 2 == 0) {
                const FracPowerSeries s = random_series(rng, 0.0, 3.0, true);
                const double nu = 0.05 + 0.9 * unit(rng);
                const double e = rel(oracle::caputo_quadrature(as_fn(s), nu, t), caputo(s, nu).eval(t));
                worst_caputo = std::max(worst_caputo, e);
                if (!(e <= 1e-6)) ++failures;
            } else {
                const FracPowerSeries u = random_series(rng, -0.5, 3.0, false);
                std::vector<Term> kt{{0.5 + unit(rng), 0.0}};
                if (unit(rng) < 0.7) kt.push_back({unit(rng), 1.0});
                if (unit(rng) < 0.4) kt.push_back({unit(rng), 2.0});
                const FracPowerSeries K0(kt);
                const double g = 0.95 * unit(rng);
                const double e = rel(oracle::convolution_quadrature(as_fn(K0), as_fn(u), g, t),
                                     convolve_singular(g, K0, u).eval(t));
                worst_conv = std::max(worst_conv, e);
                if (!(e <= 1e-6)) ++failures;
            }
        } catch (const Error&) {
            ++errors;
            ++failures;
        }
    }
    r.passed = failures == 0;
    r.details = {{"cases", cases}, {"max_rel_caputo", worst_caputo}, {"max_rel_convolution", worst_conv},
                 {"errors", errors}};
    r.summary = summary_of(failures, cases, "cases") + "; max rel " + shortest(std::max(worst_caputo, worst_conv));
    return r;
}

SuiteResult jacobi_orthogonality() {
    SuiteResult r{"jacobi_orthogonality", true, {}, nlohmann::json::object()};
    double worst = 0.0;
    std::size_t failures = 0, checks = 0;
    for (double a : {0.3, 0.99}) {
        const RegressionModel m = build_basis({}, 8, a, 0.2);
        const Eigen::MatrixXd H = gram_matrix(m);
        for (int l = 0; l <= 8; ++l)
            for (int k = 0; k < l; ++k) {
                const double ratio = std::fabs(H(l, k)) / std::sqrt(H(l, l) * H(k, k));
                worst = std::max(worst, ratio);
                ++checks;
                if (!(ratio <= 1e-10)) ++failures;
            }
    }
    r.passed = failures == 0;
    r.details = {{"max_normalized_offdiag", worst}};
    r.summary = summary_of(failures, checks, "pairs") + "; max normalized off-diagonal " + shortest(worst);
    return r;
}

namespace {

struct LemmaGen {
    std::mt19937_64 rng;
    double u(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    double sgn() { return u(0.0, 1.0) < 0.5 ? -1.0 : 1.0; }
};

oracle::LemmaReport random_lemma(const std::string& which, LemmaGen& g) {
    if (which == "log_perturbation") {
        oracle::LogPerturbationInput in;
        in.F = FracPowerSeries({{g.sgn() * g.u(0.1, 3.0), g.u(0.1, 1.0)}, {g.u(-1.0, 1.0), g.u(1.0, 2.0)}});
        in.T = g.u(0.2, 0.95);
        in.eps = g.u(0.01, 0.5);
        in.eps1 = g.u(0.05, 0.5);
        return oracle::check_log_perturbation(in);
    }
    if (which == "log_lambda") {
        oracle::LogLambdaInput in;
        in.F = FracPowerSeries({{g.sgn() * g.u(0.1, 3.0), g.u(0.1, 1.0)}, {g.u(-1.0, 1.0), g.u(1.0, 2.0)}});
        in.T = g.u(0.2, 0.95);
        in.lambda = g.u(0.3, 0.99);
        in.eps2 = g.u(0.05, 0.5);
        in.eps = g.u(0.05, 0.95) * (1.0 - std::pow(in.lambda, in.eps2));
        return oracle::check_log_lambda(in);
    }
    if (which == "leading_power") {
        oracle::LeadingPowerInput in;
        in.w0 = g.u(-1.0, 1.0);
        in.C1 = g.sgn() * g.u(0.2, 5.0);
        in.theta = g.u(0.1, 1.0);
        in.theta_star = g.u(0.1, 1.0);
        in.c = g.u(-2.0, 2.0);
        in.C2 = std::fabs(in.c) + g.u(0.01, 1.0);
        in.T = g.u(0.2, 0.95);
        in.eps = g.u(0.01, 0.5);
        in.eps3 = g.u(0.1, 0.5);
        return oracle::check_leading_power(in);
    }
    if (which == "order_recovery") {
        oracle::OrderRecoveryInput in;
        const int K = static_cast<int>(g.u(0.0, 3.0));
        const double mu0 = g.u(0.3, 0.95);
        in.mu = {mu0};
        in.r = {g.u(0.2, 2.0)};
        double prev = mu0;
        for (int k = 0; k < K; ++k) {
            const double m = g.u(0.3, 0.9) * prev;
            in.mu.push_back(m);
            in.r.push_back(g.u(-1.0, 1.0));
            prev = m;
        }
        const double eta = g.u(0.05, 0.8);
        in.v = FracPowerSeries({{g.u(-1.0, 1.0), 0.0},
                                {g.sgn() * g.u(0.2, 3.0), mu0},
                                {g.u(-1.0, 1.0), mu0 + eta}});
        in.type_two = g.u(0.0, 1.0) < 0.5;
        in.T = g.u(0.2, 0.95);
        in.eps = g.u(0.01, 0.5);
        in.eps4 = g.u(0.1, 0.5);
        return oracle::check_order_recovery(in);
    }
    if (which == "ml_average") {
        oracle::MLAverageInput in;
        in.g3 = g.u(0.2, 0.95);
        in.g4 = g.u(0.05, in.g3 - 0.05);
        in.n = std::floor(g.u(1.0, 4.0));
        in.f = FracPowerSeries({{g.sgn() * g.u(0.2, 2.0), 0.0}, {g.u(-2.0, 2.0), g.u(in.g4, 1.5)}});
        in.lambda = g.u(0.5, 0.99);
        in.eps5 = g.u(0.05, 0.5);
        in.eps = g.u(0.1, 0.9) * (1.0 - std::pow(in.lambda, in.eps5));
        in.T = g.u(0.2, 0.95);
        return oracle::check_ml_average(in);
    }
    oracle::KernelAverageInput in;
    in.gs = g.u(0.1, 1.0);
    in.g3 = g.u(0.1, 1.0);
    in.g4 = g.u(0.1, 1.0);
    in.k = FracPowerSeries({{g.sgn() * g.u(0.2, 2.0), 0.0}, {g.u(-2.0, 2.0), std::ceil(in.g3 + g.u(0.0, 1.0))}});
    in.f = FracPowerSeries({{g.sgn() * g.u(0.2, 2.0), 0.0}, {g.u(-2.0, 2.0), g.u(in.g4, 1.5)}});
    in.lambda = g.u(0.5, 0.99);
    in.eps6 = g.u(0.05, 0.5);
    in.eps = g.u(0.1, 0.9) * (1.0 - std::pow(in.lambda, in.eps6));
    in.T = g.u(0.2, 0.95);
    return oracle::check_kernel_average(in);
}

}  // namespace

SuiteResult lemmas(int per_lemma, std::uint64_t seed) {
    SuiteResult r{"lemmas", true, {}, nlohmann::json::object()};
    LemmaGen g{std::mt19937_64(seed)};
    std::size_t failures = 0, total = 0;
    for (const std::string which :
         {"log_perturbation", "log_lambda", "leading_power", "order_recovery", "ml_average", "kernel_average"}) {
        double min_margin = std::numeric_limits<double>::infinity();
        int bad = 0;
        std::string first_error;
        for (int k = 0; k < per_lemma; ++k) {
            ++total;
            try {
                const oracle::LemmaReport rep = random_lemma(which, g);
                min_margin = std::min(min_margin, rep.margin);
                if (!rep.passed) ++bad;
            } catch (const Error& e) {
                ++bad;
                if (first_error.empty()) first_error = e.what();
            }
        }
        failures += bad;
        r.details[which] = {{"inputs", per_lemma}, {"failed", bad}, {"min_margin", min_margin}};
        if (!first_error.empty()) r.details[which]["first_error"] = first_error;
    }
    r.passed = failures == 0;
    r.summary = summary_of(failures, total, "inputs with nonnegative margin");
    return r;
}

namespace {

// After the curve first drops below eps it must not grow (up to rounding) and must
// end at least an order of magnitude lower.
bool decays_after_crossing(const bounds::DeltaCurve& c, double eps) {
    std::size_t k = 0;
    while (k < c.points.size() && !(c.points[k].valid && c.points[k].delta < eps)) ++k;
    if (k == c.points.size()) return false;
    const double first = c.points[k].delta;
    for (std::size_t j = k + 1; j < c.points.size(); ++j) {
        if (!c.points[j].valid) return false;
        if (c.points[j].delta > c.points[j - 1].delta + 1e-12) return false;
    }
    return c.points.back().delta < 0.1 * first;
}

nlohmann::json curve_json(const bounds::DeltaCurve& c) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : c.points) pts.push_back({p.t_a, p.valid ? nlohmann::json(p.delta) : nlohmann::json(nullptr)});
    return {{"points", pts}, {"threshold", c.threshold ? nlohmann::json(*c.threshold) : nlohmann::json(nullptr)}};
}

}  // namespace

SuiteResult deltas() {
    SuiteResult r{"deltas", true, {}, nlohmann::json::object()};
    const std::vector<double> grid = bounds::log_grid(0.2, 1e-10, 4);
    bool ok = true;
    std::ostringstream sum;
    for (double nu : {0.3, 0.5, 0.7}) {
        const Scenario s = builtin("fip_ex82", {nu, std::nullopt});
        const double rho10 = s.data.fdo.leading().coeff.at_zero();
        const double c0 = c_nu(s.data, s.psi_exact).at_zero();
        for (double eps : {0.1, 0.3}) {
            const bounds::Horizon h =
                bounds::t_i0(eps, bounds::leading_type(s.data.fdo), rho10, c0, 0.2);
            const bounds::DeltaCurve c = bounds::empirical_delta(s, 1, grid, 0.99, eps);
            double worst = 0.0;
            bool good = true;
            for (const auto& p : c.points)
                if (p.t_a <= *h.value) {
                    good = good && p.valid && p.delta <= eps;
                    if (p.valid) worst = std::max(worst, p.delta);
                }
            ok = ok && good;
            r.details["delta1"].push_back({{"nu", nu}, {"eps_I", eps}, {"T_I0", *h.value}, {"max_delta_below", worst},
                                           {"ok", good}});
        }
    }
    const Scenario f = builtin("fip_ex82", {0.5, std::nullopt});
    const bounds::DeltaCurve d2 = bounds::empirical_delta(f, 2, grid, 0.99, 0.1);
    const Scenario g = builtin("sip_ex83", {0.5, std::nullopt});
    const bounds::DeltaCurve d3 = bounds::empirical_delta(g, 3, grid, 0.01, 0.1);
    const bool ok2 = decays_after_crossing(d2, 0.1), ok3 = decays_after_crossing(d3, 0.1);
    r.details["delta2"] = curve_json(d2);
    r.details["delta2"]["decays"] = ok2;
    r.details["delta3"] = curve_json(d3);
    r.details["delta3"]["decays"] = ok3;
    r.passed = ok && ok2 && ok3;
    sum << "delta1 <= eps_I below T_I0: " << (ok ? "yes" : "no") << "; delta2 decays: " << (ok2 ? "yes" : "no")
        << " (to " << shortest(d2.points.back().delta) << "); delta3 decays: " << (ok3 ? "yes" : "no") << " (to "
        << shortest(d3.points.back().delta) << ")";
    r.summary = sum.str();
    return r;
}

std::string leading_order_curve_csv() {
    std::string out = "nu1,t_a,nu1a_outside,nu1a_inside\n";
    const std::vector<double> grid = bounds::log_grid(0.1, 1e-12, 2);
    for (const auto& [nu, ref] : reference::kEx74LeadingOrder) {
        (void)ref;
        const Scenario s = builtin("ex74", {nu, std::nullopt});
        const EstimatorInput inp{&s.data, s.psi_exact, s.data.psi0};
        for (double t : grid) {
            const double inside = std::log(std::fabs((128.0 / 225.0) * (2.0 + std::pow(t, nu)) - 256.0 / 225.0)) /
                                  std::log(t);
            out += shortest(nu) + "," + shortest(t) + "," + shortest(nu1_estimate(inp, t)) + "," + shortest(inside) +
                   "\n";
        }
    }
    return out;
}

SuiteResult leading_order_reference() {
    SuiteResult r{"leading_order_reference", true, {}, nlohmann::json::object()};
    nlohmann::json rows = nlohmann::json::array();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& [nu, ref] : reference::kEx74LeadingOrder) {
        // With psi - psi0 = (256/225) t^nu the estimator equals nu + ln(256/225)/ln t_a.
        const double implied = std::exp(std::log(256.0 / 225.0) / (ref - nu));
        lo = std::min(lo, implied);
        hi = std::max(hi, implied);
        rows.push_back({{"nu1", nu}, {"nu1a", ref}, {"implied_t_a", implied}});
    }
    const std::string csv = leading_order_curve_csv();
    r.details = {{"reference", rows}, {"curve_rows", std::count(csv.begin(), csv.end(), '\n') - 1},
                 {"implied_t_a_range", {lo, hi}}};
    r.passed = true;
    r.summary = "reference values shipped; curve emitted; implied t_a ranges over [" + shortest(lo) + ", " +
                shortest(hi) + "], so no single t_a regenerates them";
    return r;
}

std::vector<std::string> suite_names() {
    return {"identities", "oracle", "jacobi", "lemmas", "deltas", "reference"};
}

SuiteResult run(const std::string& name) {
    if (name == "identities") return identities();
    if (name == "oracle") return oracle_equivalence();
    if (name == "jacobi") return jacobi_orthogonality();
    if (name == "lemmas") return lemmas();
    if (name == "deltas") return deltas();
    if (name == "reference") return leading_order_reference();
    fail(ErrorCode::Parse, "unknown verification suite '" + name + "'");
}

}  // namespace fracrecon::verify
