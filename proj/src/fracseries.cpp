#include "fracrecon/fracseries.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "fracrecon/error.hpp"
#include "fracrecon/kernels.hpp"
#include "fracrecon/specfun.hpp"

namespace fracrecon {

bool same_exponent(double p, double q) noexcept { return std::fabs(p - q) <= 1e-12 * std::max(1.0, std::fabs(p)); }

namespace {

bool is_constant_exponent(double p) noexcept { return std::fabs(p) <= 1e-12; }

// Ratio Gamma(a) / Gamma(b) for a, b > 0, robust to large arguments.
double gamma_ratio(double a, double b) {
    if (a < 150.0 && b < 150.0) return specfun::gamma(a) / specfun::gamma(b);
    return std::exp(specfun::lgamma(a) - specfun::lgamma(b));
}

}  // namespace

FracPowerSeries::FracPowerSeries(std::vector<Term> terms) {
    for (const Term& t : terms) {
        if (!std::isfinite(t.c) || !std::isfinite(t.p))
            fail(ErrorCode::Domain, "non-finite series term");
        if (t.c != 0.0 && t.p <= -1.0)
            fail(ErrorCode::Domain, "series exponent " + std::to_string(t.p) + " is not integrable at 0");
    }
    std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.p < b.p; });

    terms_.reserve(terms.size());
    std::size_t i = 0;
    while (i < terms.size()) {
        const double p = terms[i].p;
        double c = 0.0, mass = 0.0;
        std::size_t j = i;
        for (; j < terms.size() && same_exponent(p, terms[j].p); ++j) {
            c += terms[j].c;
            mass += std::fabs(terms[j].c);
        }
        // Merged sums that cancel down to rounding noise are treated as exact zeros.
        if (c != 0.0 && std::fabs(c) > 4.0 * DBL_EPSILON * mass) terms_.push_back({c, p});
        i = j;
    }
    if (terms_.size() > kMaxTerms)
        fail(ErrorCode::TooManyTerms, std::to_string(terms_.size()) + " terms exceed the cap of 512");
}

FracPowerSeries FracPowerSeries::constant(double c) { return FracPowerSeries({{c, 0.0}}); }

FracPowerSeries FracPowerSeries::monomial(double c, double p) { return FracPowerSeries({{c, p}}); }

double FracPowerSeries::eval(double t) const {
    if (t < 0.0 || std::isnan(t)) fail(ErrorCode::Domain, "series evaluated at negative time");
    if (terms_.empty()) return 0.0;
    if (t == 0.0) {
        double v = 0.0;
        for (const Term& term : terms_) {
            if (term.p < 0.0) fail(ErrorCode::SingularAtZero, "series with negative exponent evaluated at 0");
            if (is_constant_exponent(term.p)) v += term.c;
        }
        return v;
    }
    const std::size_t n = terms_.size();
    double cbuf[64] = {}, pbuf[64] = {};
    std::vector<double> cv, pv;
    double* cs = cbuf;
    double* ps = pbuf;
    if (n > 64) {
        cv.resize(n);
        pv.resize(n);
        cs = cv.data();
        ps = pv.data();
    }
    const double lt = std::log(t);
    for (std::size_t k = 0; k < n; ++k) {
        cs[k] = terms_[k].c;
        ps[k] = is_constant_exponent(terms_[k].p) ? 1.0 : std::exp(terms_[k].p * lt);
    }
    return kernels::dot(cs, ps, n);
}

double FracPowerSeries::min_exponent() const noexcept {
    return terms_.empty() ? std::numeric_limits<double>::infinity() : terms_.front().p;
}

double FracPowerSeries::coeff_of(double p) const noexcept {
    for (const Term& t : terms_)
        if (same_exponent(t.p, p)) return t.c;
    return 0.0;
}

bool FracPowerSeries::operator==(const FracPowerSeries& other) const noexcept {
    if (terms_.size() != other.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].c != other.terms_[i].c || terms_[i].p != other.terms_[i].p) return false;
    return true;
}

FracPowerSeries add(const FracPowerSeries& a, const FracPowerSeries& b) {
    std::vector<Term> t(a.terms());
    t.insert(t.end(), b.terms().begin(), b.terms().end());
    return FracPowerSeries(std::move(t));
}

FracPowerSeries scale(const FracPowerSeries& s, double k) {
    std::vector<Term> t(s.terms());
    for (Term& term : t) term.c *= k;
    return FracPowerSeries(std::move(t));
}

FracPowerSeries multiply(const FracPowerSeries& a, const FracPowerSeries& b) {
    std::vector<Term> t;
    t.reserve(a.size() * b.size());
    for (const Term& x : a.terms())
        for (const Term& y : b.terms()) t.push_back({x.c * y.c, x.p + y.p});
    return FracPowerSeries(std::move(t));
}

FracPowerSeries caputo(const FracPowerSeries& s, double nu) {
    if (!(nu > 0.0) || nu > 1.0) fail(ErrorCode::Domain, "Caputo order must lie in (0,1]");
    std::vector<Term> out;
    out.reserve(s.size());
    for (const Term& t : s.terms()) {
        if (is_constant_exponent(t.p)) continue;
        if (t.p < 0.0) fail(ErrorCode::Domain, "Caputo derivative of a negative power");
        if (nu == 1.0)
            out.push_back({t.c * t.p, t.p - 1.0});
        else
            out.push_back({t.c * gamma_ratio(t.p + 1.0, t.p + 1.0 - nu), t.p - nu});
    }
    return FracPowerSeries(std::move(out));
}

FracPowerSeries convolve_singular(double gamma, const FracPowerSeries& K0, const FracPowerSeries& s) {
    if (!(gamma >= 0.0) || !(gamma < 1.0)) fail(ErrorCode::Domain, "kernel exponent must lie in [0,1)");
    std::vector<Term> out;
    out.reserve(K0.size() * s.size());
    for (const Term& k : K0.terms()) {
        if (k.p - gamma + 1.0 <= 0.0 || k.p < 0.0) fail(ErrorCode::Domain, "kernel term is not integrable");
        for (const Term& x : s.terms()) {
            const double b = specfun::beta(k.p - gamma + 1.0, x.p + 1.0);
            out.push_back({k.c * x.c * b, k.p + x.p + 1.0 - gamma});
        }
    }
    return FracPowerSeries(std::move(out));
}

double j_mu(const FracPowerSeries& s, double mu, double t) {
    if (!(mu > 0.0) || !(mu < 1.0)) fail(ErrorCode::Domain, "J_mu needs mu in (0,1)");
    if (t < 0.0) fail(ErrorCode::Domain, "J_mu at negative time");
    const FracPowerSeries d = caputo(s, mu);
    double v = 0.0;
    for (const Term& term : d.terms()) {
        if (term.p < 0.0 && !is_constant_exponent(term.p))
            fail(ErrorCode::SingularAtZero, "D^mu s is unbounded at 0");
        if (is_constant_exponent(term.p)) continue;
        if (t == 0.0) continue;
        v += term.c * specfun::beta(mu, term.p + 1.0) * std::pow(t, mu + term.p);
    }
    return v;
}

FdoSpec::FdoSpec(std::vector<FdoTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) fail(ErrorCode::InvariantViolation, "FDO needs at least one term");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const double nu = terms_[i].order;
        if (!(nu > 0.0) || nu > 1.0)
            fail(ErrorCode::InvariantViolation, "FDO order " + std::to_string(nu) + " outside (0,1]");
        if (i > 0 && !(nu < terms_[i - 1].order))
            fail(ErrorCode::InvariantViolation, "FDO orders must be strictly decreasing");
    }
    double rho1_0 = 0.0;
    try {
        rho1_0 = terms_.front().coeff.at_zero();
    } catch (const Error&) {
        fail(ErrorCode::InvariantViolation, "leading coefficient is unbounded at 0");
    }
    if (rho1_0 == 0.0) fail(ErrorCode::InvariantViolation, "leading coefficient vanishes at t = 0");
}

FracPowerSeries apply_term(const FdoTerm& term, const FracPowerSeries& s, double order) {
    if (term.placement == Placement::Outside) return multiply(term.coeff, caputo(s, order));
    return caputo(multiply(term.coeff, s), order);
}

FracPowerSeries apply_fdo(const FdoSpec& op, const FracPowerSeries& s) {
    if (s.min_exponent() < 0.0) fail(ErrorCode::Domain, "FDO applied to a series with negative exponents");
    FracPowerSeries acc;
    for (const FdoTerm& term : op.terms()) acc = add(acc, apply_term(term, s));
    return acc;
}

nlohmann::json to_json(const FracPowerSeries& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Term& t : s.terms()) arr.push_back({{"c", t.c}, {"p", t.p}});
    return arr;
}

FracPowerSeries series_from_json(const nlohmann::json& j) {
    if (j.is_number()) return FracPowerSeries::constant(j.get<double>());
    if (!j.is_array()) fail(ErrorCode::Parse, "series must be an array of {c, p} objects");
    std::vector<Term> terms;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("c") || !e.contains("p") || !e["c"].is_number() || !e["p"].is_number())
            fail(ErrorCode::Parse, "series entry needs numeric fields c and p");
        terms.push_back({e["c"].get<double>(), e["p"].get<double>()});
    }
    return FracPowerSeries(std::move(terms));
}

nlohmann::json to_json(const FdoSpec& op) {
    nlohmann::json arr = nlohmann::json::array();
    for (const FdoTerm& t : op.terms())
        arr.push_back({{"order", t.order},
                       {"placement", t.placement == Placement::Inside ? "inside" : "outside"},
                       {"coeff", to_json(t.coeff)}});
    return arr;
}

FdoSpec fdo_from_json(const nlohmann::json& j) {
    if (!j.is_array()) fail(ErrorCode::Parse, "fdo must be an array");
    std::vector<FdoTerm> terms;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("order") || !e.contains("coeff"))
            fail(ErrorCode::Parse, "fdo entry needs order and coeff");
        Placement pl = Placement::Outside;
        if (e.contains("placement")) {
            const std::string s = e["placement"].get<std::string>();
            if (s == "inside")
                pl = Placement::Inside;
            else if (s != "outside")
                fail(ErrorCode::Parse, "placement must be inside or outside, got " + s);
        }
        terms.push_back({e["order"].get<double>(), series_from_json(e["coeff"]), pl});
    }
    return FdoSpec(std::move(terms));
}

}  // namespace fracrecon

namespace fracrecon {

double sup_norm_bound(const FracPowerSeries& s, double T) {
    double v = 0.0;
    for (const Term& t : s.terms()) {
        if (t.p < 0.0 && !is_constant_exponent(t.p)) return std::numeric_limits<double>::infinity();
        v += std::fabs(t.c) * (is_constant_exponent(t.p) ? 1.0 : std::pow(T, t.p));
    }
    return v;
}

double holder_seminorm_bound(const FracPowerSeries& s, double exponent, double T) {
    double v = 0.0;
    for (const Term& t : s.terms()) {
        if (is_constant_exponent(t.p)) continue;
        if (t.p < exponent) return std::numeric_limits<double>::infinity();
        // |t^e - s^e| <= |t - s|^e for e <= 1, and <= e T^{e-1} |t - s| otherwise
        const double lip = t.p <= 1.0 ? 1.0 : t.p;
        v += std::fabs(t.c) * lip * std::pow(T, t.p - exponent);
    }
    return v;
}

}  // namespace fracrecon
