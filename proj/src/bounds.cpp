#include "fracrecon/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracrecon/error.hpp"
#include "fracrecon/format.hpp"
#include "fracrecon/reconstruct.hpp"
#include "fracrecon/specfun.hpp"

namespace fracrecon::bounds {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Supplied: return "supplied";
        case Provenance::Estimated: return "estimated";
        case Provenance::Default: return "default";
        case Provenance::Derived: return "derived";
    }
    return "unknown";
}

void ConstantsLedger::put(const std::string& name, double value, Provenance p) {
    if (!std::isfinite(value) || value < 0.0)
        fail(ErrorCode::InvariantViolation, "ledger entry " + name + " must be finite and non-negative");
    entries_[name] = {value, p};
}

void ConstantsLedger::supply(const std::string& name, double value) { put(name, value, Provenance::Supplied); }

void ConstantsLedger::estimate(const std::string& name, double value) {
    auto it = entries_.find(name);
    if (it != entries_.end() && it->second.provenance == Provenance::Supplied) return;
    put(name, value, Provenance::Estimated);
}

void ConstantsLedger::set_default(const std::string& name, double value) {
    if (has(name)) return;
    put(name, value, Provenance::Default);
    warnings_.push_back(name + " defaulted to " + shortest(value) +
                        "; horizons depending on it are not certified");
}

void ConstantsLedger::derive(const std::string& name, double value) {
    auto it = entries_.find(name);
    if (it != entries_.end() && it->second.provenance == Provenance::Supplied) return;
    put(name, value, Provenance::Derived);
}

bool ConstantsLedger::has(const std::string& name) const { return entries_.count(name) != 0; }

double ConstantsLedger::get(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) fail(ErrorCode::MissingConstant, name);
    return it->second.value;
}

Provenance ConstantsLedger::provenance(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) fail(ErrorCode::MissingConstant, name);
    return it->second.provenance;
}

namespace {

std::string rho_name(std::size_t i) { return "rho" + std::to_string(i); }

double rho_sum(const ConstantsLedger& l, std::size_t M, std::size_t skip = 0) {
    double s = 0.0;
    for (std::size_t i = 1; i <= M; ++i)
        if (i != skip) s += l.get(rho_name(i));
    return s;
}

double c3_formula(const ConstantsLedger& l, double omega, std::size_t M) {
    return l.get("C0") * omega * std::max(1.0, l.get("C2")) * rho_sum(l, M);
}

}  // namespace

bool ConstantsLedger::c3_consistent(double omega_measure, std::size_t M) const {
    const double c3 = c3_formula(*this, omega_measure, M);
    return std::fabs(c3 - get("C3")) <= 1e-12 * std::max(1.0, std::fabs(c3));
}

nlohmann::json to_json(const ConstantsLedger& l) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, e] : l.entries()) j[k] = {{"value", e.value}, {"provenance", to_string(e.provenance)}};
    return j;
}

ConstantsLedger ledger_from_json(const nlohmann::json& j) {
    if (!j.is_object()) fail(ErrorCode::Parse, "constants ledger must be a JSON object");
    ConstantsLedger l;
    for (const auto& [k, v] : j.items()) {
        if (v.is_number())
            l.supply(k, v.get<double>());
        else if (v.is_object() && v.contains("value"))
            l.supply(k, v.at("value").get<double>());
        else
            fail(ErrorCode::Parse, "ledger entry " + k + " is neither a number nor {value: ...}");
    }
    return l;
}

FdoType leading_type(const FdoSpec& fdo) {
    return fdo.leading().placement == Placement::Outside ? FdoType::I : FdoType::II;
}

nlohmann::json to_json(const Horizon& h) {
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& [k, v] : h.terms) terms[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf");
    nlohmann::json j = {{"value", h.value ? nlohmann::json(*h.value) : nlohmann::json(nullptr)},
                        {"argmin", h.argmin},
                        {"terms", terms}};
    if (!h.value) j["absent"] = h.absent_reason;
    return j;
}

namespace {

Horizon minimum(std::vector<std::pair<std::string, double>> terms) {
    Horizon h;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [k, v] : terms)
        if (v < best) {
            best = v;
            h.argmin = k;
        }
    h.value = best;
    h.terms = std::move(terms);
    return h;
}

void eps_range(double v, double lo, double hi, const char* what) {
    if (!(v > lo && v < hi)) {
        std::ostringstream os;
        os << what << " = " << v << " must lie in (" << lo << ", " << hi << ")";
        fail(ErrorCode::EpsilonOutOfRange, os.str());
    }
}

std::vector<double> orders(const FdoSpec& fdo) {
    std::vector<double> v;
    for (const auto& t : fdo.terms()) v.push_back(t.order);
    return v;
}

}  // namespace

Horizon t_i0(double eps_I, FdoType type, double rho1_at_0, double c_nu_0, double t_star) {
    if (!(eps_I > 0.0 && eps_I < 1.0)) fail(ErrorCode::Domain, "eps_I must lie in (0,1)");
    if (c_nu_0 == 0.0) fail(ErrorCode::Domain, "the data expression must not vanish at t = 0");
    if (!(t_star > 0.0 && t_star < 1.0)) fail(ErrorCode::Domain, "t* must lie in (0,1)");
    const double G = specfun::gamma_lower();
    const double c = std::fabs(c_nu_0);
    const double e = 2.0 / eps_I;
    if (type == FdoType::I) {
        if (!(rho1_at_0 > 0.0)) fail(ErrorCode::Domain, "rho_1(0) must be positive");
        return minimum({{"t_star", t_star},
                        {"rho_over_c", std::pow(rho1_at_0 / (G * c), -e)},
                        {"c_over_rho", std::pow(c / (G * rho1_at_0), -e)},
                        {"one_minus_eps", std::pow(1.0 - eps_I, e)}});
    }
    return minimum({{"t_star", t_star},
                    {"gamma_c", std::pow(G * c, e)},
                    {"c_over_gamma", std::pow(c / G, -e)},
                    {"one_minus_eps", std::pow(1.0 - eps_I, e)}});
}

double t_k(const FracPowerSeries& K0, double t_star) {
    const double k0 = K0.eval(0.0);
    if (k0 == 0.0) fail(ErrorCode::KernelVanishesAtZero, "K0(0) = 0");
    const bool pos = k0 > 0.0;
    constexpr int grid = 2048;
    double prev = 0.0;
    for (int i = 1; i <= grid; ++i) {
        const double t = t_star * i / grid;
        const double v = K0.eval(t);
        if ((v > 0.0) != pos) {
            double lo = prev, hi = t;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                (((K0.eval(mid) > 0.0) == pos) ? lo : hi) = mid;
            }
            return lo;
        }
        prev = t;
    }
    return t_star;
}

double c4(const ConstantsLedger& ledger, const FdoSpec& fdo) {
    const double G = specfun::gamma_lower();
    const double C0 = ledger.get("C0");
    if (leading_type(fdo) == FdoType::I) {
        const double r1 = fdo.leading().coeff.at_zero();
        double s = 0.0;
        for (std::size_t i = 1; i < fdo.size(); ++i) s += std::fabs(fdo.term(i).coeff.at_zero());
        return C0 / G * (1.0 + 2.0 * s / (r1 * G));
    }
    const double sum = rho_sum(ledger, fdo.size());
    if (sum == 0.0) fail(ErrorCode::MissingConstant, "coefficient norms are all zero");
    return C0 / G * (ledger.get("C1") + ledger.get("C2")) * (1.0 + 2.0 / G) * sum;
}

double nu_zero(const FdoSpec& fdo, std::size_t i_star, double alpha) {
    const std::vector<double> nu = orders(fdo);
    if (nu.size() < 2) fail(ErrorCode::WrongBranch, "the FDO has a single term");
    if (i_star == 2) {
        if (nu.size() < 3) fail(ErrorCode::WrongBranch, "i* = 2 needs a third order");
        return alpha * nu[2] / 2.0;
    }
    return alpha * nu[1] / 2.0;
}

namespace {

double ratio_base(double eps_I, double c, double C4, double rho10, double R, FdoType type) {
    return type == FdoType::I ? eps_I * std::fabs(c) / (C4 * rho10 * R) : eps_I * std::fabs(c) / (C4 * R);
}

}  // namespace

Horizon t_i(double eps_I, const ConstantsLedger& ledger, const Scenario& s, const BoundsConfig& cfg) {
    const ProblemData& d = s.data;
    const FdoType type = leading_type(d.fdo);
    const double rho10 = d.fdo.leading().coeff.at_zero();
    const double c = c_nu(d, s.psi_exact).at_zero();
    const Horizon h0 = t_i0(eps_I, type, rho10, c, cfg.t_star);
    const std::size_t M = d.fdo.size();
    const double C4 = c4(ledger, d.fdo);
    const double R = ledger.get("R");
    const double base = ratio_base(eps_I, c, C4, rho10, R, type);
    if (d.kind == ProblemKind::FIP) {
        if (M < 3) fail(ErrorCode::WrongBranch, "the first problem needs at least three terms");
        const double nu0 = nu_zero(d.fdo, d.i_star, cfg.alpha);
        return minimum({{"T_I0", *h0.value}, {"constant_term", std::pow(base, 1.0 / nu0)}});
    }
    if (M < 2) fail(ErrorCode::WrongBranch, "the second problem horizon needs a second order");
    const double nu2 = d.fdo.term(1).order;
    if (!d.kernel_gamma) fail(ErrorCode::WrongBranch, "no memory kernel");
    return minimum({{"T_I0", *h0.value},
                    {"constant_term", std::pow(base, 2.0 / (cfg.alpha * nu2))},
                    {"T_K", t_k(d.K0, cfg.t_star)}});
}

long find_n_star(double a, double b) {
    const double scale = std::fabs(a) + std::fabs(b);
    for (long n = 1; n <= 1000000; ++n)
        if (std::fabs(a / n + b) > 1e-12 * scale) return n;
    fail(ErrorCode::NotFound, "U(0, n) vanishes for every n up to 1e6");
}

std::pair<double, double> u_at_zero(const Scenario& s) {
    const ProblemData& d = s.data;
    if (d.kind != ProblemKind::FIP) fail(ErrorCode::WrongBranch, "U is defined for the first problem");
    const FdoTerm& ti = d.fdo.term(d.i_star - 1);
    const double nu1 = d.fdo.leading().order;
    const FracPowerSeries base = ti.placement == Placement::Outside ? s.psi_exact : multiply(ti.coeff, s.psi_exact);
    const double a = caputo(base, nu1).at_zero();
    const AuxAssembler aux(d, s.psi_exact);
    const double b = aux.f_nu_series(nu1).at_zero() / aux.f_nu_normalizer(0.0);
    return {a, b};
}

long find_n_star(const Scenario& s) {
    const auto [a, b] = u_at_zero(s);
    return find_n_star(a, b);
}

namespace {

struct PreLimit {
    double nu1a;
    double alpha1;
    double D_norm;  // ||D^{nu1a} psi|| in C^{alpha1}([0, t1*])
    double c2_0;
};

PreLimit prelimit_data(const Scenario& s, const BoundsConfig& cfg) {
    const ProblemData& d = s.data;
    const double nu1 = d.fdo.leading().order;
    const double t1 = cfg.t1_star.value_or(cfg.t_star);
    PreLimit p{};
    p.nu1a = cfg.nu1a ? *cfg.nu1a
                           : nu1_estimate(EstimatorInput{&d, s.psi_exact, d.psi0}, cfg.t_a);
    if (!(p.nu1a < nu1 - 1e-10))
        fail(ErrorCode::HypothesisViolated,
             "nu_{1,a} = " + shortest(p.nu1a) + " does not stay below nu_1; use the known-order variant");
    const FracPowerSeries D = caputo(s.psi_exact, p.nu1a);
    double a1 = 0.999;
    for (const Term& t : D.terms())
        if (std::fabs(t.p) > 1e-12) a1 = std::min(a1, t.p);
    p.alpha1 = cfg.alpha1.value_or(a1);
    p.D_norm = sup_norm_bound(D, t1) + holder_seminorm_bound(D, p.alpha1, t1);
    const FdoTerm& lead = d.fdo.leading();
    if (lead.placement == Placement::Outside)
        p.c2_0 = lead.coeff.at_zero() * (caputo(s.psi_exact, nu1).at_zero() - D.at_zero());
    else {
        const FracPowerSeries rp = multiply(lead.coeff, s.psi_exact);
        p.c2_0 = caputo(rp, nu1).at_zero() - caputo(rp, p.nu1a).at_zero();
    }
    if (p.c2_0 == 0.0) fail(ErrorCode::HypothesisViolated, "the order-mismatch term vanishes at t = 0");
    return p;
}

double nu_upper(const Scenario& s, const BoundsConfig& cfg) {
    return cfg.nu_upper.value_or(0.5 * (1.0 + s.data.fdo.leading().order));
}

}  // namespace

HorizonPair t_ii(double eps_II, ConstantsLedger& l, const Scenario& s, const BoundsConfig& cfg) {
    const ProblemData& d = s.data;
    if (d.kind != ProblemKind::FIP) fail(ErrorCode::WrongBranch, "T_II concerns the first problem");
    const std::vector<double> nu = orders(d.fdo);
    const std::size_t M = nu.size(), is = d.i_star;
    const double nu0 = nu_zero(d.fdo, is, cfg.alpha);
    const long n = find_n_star(s);
    const auto [a, b] = u_at_zero(s);
    const double U0 = std::fabs(a / n + b);
    const double G = specfun::gamma_lower();
    const double C0 = l.get("C0"), C2 = l.get("C2"), R = l.get("R"), omega = d.omega_measure;
    const double rinv = l.get("rho_inv_istar");
    const double C3 = l.get("C3");
    const double C7 = std::max(1.0, rinv) * (C0 * omega * std::max(1.0, C2) * rho_sum(l, M, is) + C3);
    const double C9 = G * U0 /
                      (3.0 * specfun::gamma(nu0) *
                       ((C7 + C0 * omega * std::max(1.0, C2 * rinv)) * R + n * U0));
    l.derive("C7", C7);
    l.derive("C9", C9);
    const double eps = cfg.eps;
    const double c9e = C9 * eps / (1.0 + n * C9 * eps);

    HorizonPair out;
    try {
        eps_range(eps_II, 0.0, 1.0, "eps_II");
        eps_range(eps, 0.0, 1.0 - std::pow(cfg.lambda, eps_II), "eps");
        out.known_nu1 = minimum({{"t_star", cfg.t_star},
                                 {"n_star", std::pow(2.0 * n, -1.0 / nu0)},
                                 {"C9", std::pow(c9e, 2.0 / (cfg.alpha * nu[0]))}});
    } catch (const Error& e) {
        out.known_nu1.absent_reason = e.what();
    }

    try {
        if (M < 3) fail(ErrorCode::WrongBranch, "the general horizon needs at least three terms");
        const double nu_low = cfg.nu_lower.value_or(nu.back() / 2.0);
        const double next = is < M ? nu[is] : nu_low;
        eps_range(cfg.eps_I, 0.0, std::min(next, 1.0 - nu_upper(s, cfg)), "eps_I");
        const PreLimit p = prelimit_data(s, cfg);
        const double eps_nu = p.nu1a - next;
        eps_range(eps_II, eps_nu, 1.0, "eps_II");
        eps_range(eps, 0.0, 1.0 - std::pow(cfg.lambda, (eps_II - eps_nu) / 3.0), "eps");
        const double R1 = l.get(rho_name(1)) * (R + p.D_norm);
        const double C6 = std::max({C0 * omega, C2 * C0 * omega, l.get("C5")});
        const double C8 = C6 + C7;
        l.derive("R1", R1);
        l.derive("C6", C6);
        l.derive("C8", C8);
        const double a3 = std::min(p.alpha1, nu0);
        const Horizon ti = t_i(cfg.eps_I, l, s, cfg);
        out.general = minimum({{"t1_star", cfg.t1_star.value_or(cfg.t_star)},
                               {"T_I", *ti.value},
                               {"n_star", std::pow(2.0 * n, -1.0 / nu0)},
                               {"C9", std::pow(c9e, 1.0 / nu0)},
                               {"C8", std::pow(eps * std::fabs(p.c2_0) / (3.0 * C8 * (R + R1)), 1.0 / a3)}});
    } catch (const Error& e) {
        out.general.absent_reason = e.what();
    }
    return out;
}

HorizonPair t_iii(double eps_III, ConstantsLedger& l, const Scenario& s, const BoundsConfig& cfg) {
    const ProblemData& d = s.data;
    if (d.kind != ProblemKind::SIP || !d.kernel_gamma) fail(ErrorCode::WrongBranch, "T_III concerns the second problem");
    const std::vector<double> nu = orders(d.fdo);
    const double gamma = *d.kernel_gamma;
    const double gbar = cfg.gamma_bar.value_or(gamma / 2.0);
    if (!(gamma > gbar && gamma < 1.0)) fail(ErrorCode::HypothesisViolated, "gamma must lie in (gamma_bar, 1)");
    eps_range(cfg.eps_I, 0.0, 1.0 - nu_upper(s, cfg), "eps_I");
    const double G = specfun::gamma_lower();
    const double c1 = (double(d.delta_flag) * d.I - multiply(d.b0, s.psi_exact)).at_zero();
    const double k0 = d.K0.at_zero();
    if (k0 == 0.0) fail(ErrorCode::KernelVanishesAtZero, "K0(0) = 0");
    const double semK = l.get("K0_seminorm"), supK = l.get("K0_sup"), R2 = l.get("R2");
    const double eps = cfg.eps;
    auto kernel_term = [&](double a6) {
        return std::pow(std::fabs(c1) * std::fabs(k0) * G * eps / (3.0 * (semK * std::fabs(c1) + supK * R2)),
                        1.0 / a6);
    };

    HorizonPair out;
    try {
        eps_range(eps_III, 0.0, 1.0, "eps_III");
        eps_range(eps, 0.0, 1.0 - std::pow(cfg.mu, eps_III), "eps");
        const double a6 = std::min({cfg.alpha5, cfg.alpha / 2.0, 2.0 * nu[0] / (2.0 - cfg.alpha)});
        out.known_nu1 = minimum({{"t_star", cfg.t_star}, {"kernel", kernel_term(a6)}});
    } catch (const Error& e) {
        out.known_nu1.absent_reason = e.what();
    }

    try {
        if (nu.size() < 2) fail(ErrorCode::WrongBranch, "the general horizon needs a second order");
        eps_range(eps_III, 1.0 - gbar, 1.0, "eps_III");
        eps_range(eps, 0.0, 1.0 - std::pow(cfg.mu, (eps_III + gbar - 1.0) / 3.0), "eps");
        const PreLimit p = prelimit_data(s, cfg);
        const double a6 = std::min({cfg.alpha5, cfg.alpha / 2.0, 2.0 * nu[1] / (2.0 - cfg.alpha)});
        const double a7 = std::min(p.alpha1, cfg.alpha * nu[1] / 2.0);
        const double C0 = l.get("C0"), C2 = l.get("C2"), R = l.get("R"), omega = d.omega_measure;
        const double R1 = l.get(rho_name(1)) * (R + p.D_norm);
        const double C6 = std::max({C0 * omega, C2 * C0 * omega, l.get("C5")});
        l.derive("R1", R1);
        l.derive("C6", C6);
        const double Fa0 = AuxAssembler(d, s.psi_exact).f_gamma_series(p.nu1a).at_zero();
        if (Fa0 == 0.0) fail(ErrorCode::HypothesisViolated, "F_gamma at nu_{1,a} vanishes at t = 0");
        const Horizon ti = t_i(cfg.eps_I, l, s, cfg);
        const double denom = 3.0 * (l.get("C3") * R + C6 * R1 + l.get("R3"));
        out.general = minimum({{"t1_star", cfg.t1_star.value_or(cfg.t_star)},
                               {"T_I", *ti.value},
                               {"T_K", t_k(d.K0, cfg.t_star)},
                               {"kernel", kernel_term(a6)},
                               {"source", std::pow(eps * std::fabs(Fa0) / denom, 1.0 / a7)}});
    } catch (const Error& e) {
        out.general.absent_reason = e.what();
    }
    return out;
}

namespace {

template <class F>
double sup_of(F&& f, int n, double T) {
    double m = 0.0;
    for (int i = 0; i <= n; ++i) m = std::max(m, std::fabs(f(T * i / n)));
    return m;
}

template <class F>
double seminorm_of(F&& f, double e, int n, double T) {
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = f(T * i / n);
    double m = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            m = std::max(m, std::fabs(v[j] - v[i]) / std::pow(T * (j - i) / n, e));
    return m;
}

}  // namespace

double sampled_sup(const FracPowerSeries& f, int n, double T) {
    return sup_of([&](double t) { return f.eval(t); }, n, T);
}

double sampled_seminorm(const FracPowerSeries& f, double exponent, int n, double T) {
    return seminorm_of([&](double t) { return f.eval(t); }, exponent, n, T);
}

ConstantsLedger estimate_norms(const Scenario& s, int n, double T, double rho_holder, double alpha5) {
    if (n < 2) fail(ErrorCode::Domain, "grid density must be at least 2");
    const ProblemData& d = s.data;
    ConstantsLedger l;
    for (std::size_t i = 1; i <= d.fdo.size(); ++i) {
        const FracPowerSeries& r = d.fdo.term(i - 1).coeff;
        l.estimate(rho_name(i), sampled_sup(r, n, T) + sampled_seminorm(r, rho_holder, n, T));
    }
    if (d.kind == ProblemKind::FIP && d.i_star >= 1) {
        const FracPowerSeries& r = d.fdo.term(d.i_star - 1).coeff;
        auto inv = [&](double t) { return 1.0 / r.eval(t); };
        l.estimate("rho_inv_istar", sup_of(inv, n, T) + seminorm_of(inv, rho_holder, n, T));
    }
    l.estimate("a0", sampled_sup(d.a0, n, T) + sampled_seminorm(d.a0, rho_holder, n, T));
    l.estimate("b0", sampled_sup(d.b0, n, T) + sampled_seminorm(d.b0, rho_holder, n, T));
    if (d.kernel_gamma) {
        l.estimate("K0_sup", sampled_sup(d.K0, n, T));
        l.estimate("K0_seminorm", sampled_seminorm(d.K0, alpha5, n, T));
    }
    return l;
}

ConstantsLedger default_ledger(const Scenario& s, const BoundsConfig& cfg) {
    ConstantsLedger l;
    complete_ledger(l, s, cfg);
    return l;
}

void complete_ledger(ConstantsLedger& l, const Scenario& s, const BoundsConfig& cfg) {
    for (const char* k : {"C0", "C1", "C2", "C5", "R", "R2", "R3"}) l.set_default(k, 1.0);
    const ConstantsLedger est = estimate_norms(s, cfg.norm_grid, cfg.t_star, cfg.rho_holder, cfg.alpha5);
    for (const auto& [k, e] : est.entries()) l.estimate(k, e.value);
    l.derive("C3", c3_formula(l, s.data.omega_measure, s.data.fdo.size()));
    l.derive("C4", c4(l, s.data.fdo));
}

std::vector<double> log_grid(double hi, double lo, int per_decade) {
    if (!(hi > lo && lo > 0.0 && per_decade >= 1)) fail(ErrorCode::Domain, "log grid needs hi > lo > 0");
    std::vector<double> g;
    const double step = 1.0 / per_decade;
    const double top = std::log10(hi), bot = std::log10(lo);
    const int n = static_cast<int>(std::floor((top - bot) / step + 1e-9));
    for (int k = 0; k <= n; ++k) g.push_back(std::pow(10.0, top - k * step));
    return g;
}

DeltaCurve empirical_delta(const Scenario& s, int which, const std::vector<double>& grid, double step, double eps) {
    if (which < 1 || which > 3) fail(ErrorCode::Domain, "delta index must be 1, 2 or 3");
    if (which == 2 && s.data.kind != ProblemKind::FIP) fail(ErrorCode::WrongBranch, "delta 2 needs the first problem");
    if (which == 3 && s.data.kind != ProblemKind::SIP) fail(ErrorCode::WrongBranch, "delta 3 needs the second problem");
    DeltaCurve c;
    c.which = which;
    for (double t : grid) {
        DeltaPoint p{t, 0.0, true};
        try {
            const ParamPair pp = prelimit_exact(s, t, step);
            p.delta = which == 1 ? std::fabs(s.truth.nu1 - pp.nu1) : std::fabs(s.truth.second - pp.second);
            p.valid = std::isfinite(p.delta);
        } catch (const Error&) {
            p.valid = false;
            p.delta = std::numeric_limits<double>::quiet_NaN();
        }
        c.points.push_back(p);
    }
    std::vector<DeltaPoint> asc = c.points;
    std::sort(asc.begin(), asc.end(), [](const DeltaPoint& a, const DeltaPoint& b) { return a.t_a < b.t_a; });
    for (const DeltaPoint& p : asc) {
        if (!p.valid || !(p.delta < eps)) break;
        c.threshold = p.t_a;
    }
    return c;
}

std::string delta_to_csv(const DeltaCurve& c) {
    std::string out = "t_a,delta,valid\n";
    for (const DeltaPoint& p : c.points)
        out += shortest(p.t_a) + "," + (p.valid ? shortest(p.delta) : std::string("nan")) + "," +
               (p.valid ? "1" : "0") + "\n";
    return out;
}

BoundsReport compute_bounds(const Scenario& s, const ConstantsLedger& supplied, const BoundsConfig& cfg) {
    BoundsReport r;
    r.ledger = supplied;
    complete_ledger(r.ledger, s, cfg);
    r.eps_I = cfg.eps_I;
    r.eps_II = cfg.eps_II;
    r.eps_III = cfg.eps_III;
    r.eps = cfg.eps;
    const ProblemData& d = s.data;
    auto guarded = [](Horizon& h, auto&& fn) {
        try {
            h = fn();
        } catch (const Error& e) {
            h = Horizon{};
            h.absent_reason = e.what();
        }
    };
    guarded(r.T_I0, [&] {
        return t_i0(cfg.eps_I, leading_type(d.fdo), d.fdo.leading().coeff.at_zero(), c_nu(d, s.psi_exact).at_zero(),
                    cfg.t_star);
    });
    if (d.kernel_gamma)
        guarded(r.T_K, [&] { return minimum({{"T_K", t_k(d.K0, cfg.t_star)}}); });
    else
        r.T_K.absent_reason = "no memory kernel";
    guarded(r.T_I, [&] { return t_i(cfg.eps_I, r.ledger, s, cfg); });
    if (!r.T_I.value && r.T_I0.value) r.T_I.terms.push_back({"T_I0", *r.T_I0.value});
    auto pair_guard = [](HorizonPair& h, auto&& fn) {
        try {
            h = fn();
        } catch (const Error& e) {
            h.general = Horizon{};
            h.general.absent_reason = e.what();
            h.known_nu1 = h.general;
        }
    };
    if (d.kind == ProblemKind::FIP) {
        pair_guard(r.T_II, [&] { return t_ii(cfg.eps_II, r.ledger, s, cfg); });
        r.T_III.general.absent_reason = r.T_III.known_nu1.absent_reason = "T_III concerns the second problem";
    } else {
        pair_guard(r.T_III, [&] { return t_iii(cfg.eps_III, r.ledger, s, cfg); });
        r.T_II.general.absent_reason = r.T_II.known_nu1.absent_reason = "T_II concerns the first problem";
    }
    if (r.T_I.value && r.T_I0.value && *r.T_I.value > *r.T_I0.value)
        fail(ErrorCode::InvariantViolation, "T_I exceeds T_I0");
    if (r.ledger.has("C3") && !r.ledger.c3_consistent(d.omega_measure, d.fdo.size()))
        r.warnings.push_back("supplied C3 differs from C0 |Omega| max{1,C2} sum ||rho_i||");
    r.warnings.insert(r.warnings.begin(), r.ledger.warnings().begin(), r.ledger.warnings().end());
    return r;
}

nlohmann::json to_json(const BoundsReport& r) {
    auto pair = [](const HorizonPair& h) {
        return nlohmann::json{{"general", to_json(h.general)}, {"known_nu1", to_json(h.known_nu1)}};
    };
    return {{"T_I0", to_json(r.T_I0)},
            {"T_K", to_json(r.T_K)},
            {"T_I", to_json(r.T_I)},
            {"T_II", pair(r.T_II)},
            {"T_III", pair(r.T_III)},
            {"epsilons", {{"eps_I", r.eps_I}, {"eps_II", r.eps_II}, {"eps_III", r.eps_III}, {"eps", r.eps}}},
            {"warnings", r.warnings},
            {"ledger", to_json(r.ledger)}};
}

}  // namespace fracrecon::bounds
