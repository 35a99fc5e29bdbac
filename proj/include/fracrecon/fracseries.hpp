#pragma once

#include <cstddef>
#include <vector>

#include "json.hpp"

namespace fracrecon {

struct Term {
    double c;
    double p;
};

// Finite sum of c_k t^{p_k}. Exponents are kept sorted, distinct and > -1;
// zero coefficients are dropped on construction.
class FracPowerSeries {
public:
    static constexpr std::size_t kMaxTerms = 512;

    FracPowerSeries() = default;
    explicit FracPowerSeries(std::vector<Term> terms);

    static FracPowerSeries constant(double c);
    static FracPowerSeries monomial(double c, double p);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    double eval(double t) const;
    double at_zero() const { return eval(0.0); }
    // Smallest exponent carrying a nonzero coefficient; +inf for the zero series.
    double min_exponent() const noexcept;
    // Coefficient of t^p (0 if absent), using the merge tolerance.
    double coeff_of(double p) const noexcept;

    bool operator==(const FracPowerSeries& other) const noexcept;

private:
    std::vector<Term> terms_;
};

bool same_exponent(double p, double q) noexcept;

FracPowerSeries add(const FracPowerSeries& a, const FracPowerSeries& b);
FracPowerSeries scale(const FracPowerSeries& s, double k);
FracPowerSeries multiply(const FracPowerSeries& a, const FracPowerSeries& b);

inline FracPowerSeries operator+(const FracPowerSeries& a, const FracPowerSeries& b) { return add(a, b); }
inline FracPowerSeries operator-(const FracPowerSeries& a, const FracPowerSeries& b) { return add(a, scale(b, -1.0)); }
inline FracPowerSeries operator-(const FracPowerSeries& a) { return scale(a, -1.0); }
inline FracPowerSeries operator*(double k, const FracPowerSeries& s) { return scale(s, k); }
inline FracPowerSeries operator*(const FracPowerSeries& a, const FracPowerSeries& b) { return multiply(a, b); }

FracPowerSeries caputo(const FracPowerSeries& s, double nu);

// (t^{-gamma} K0) * s, term by term through Beta integrals.
FracPowerSeries convolve_singular(double gamma, const FracPowerSeries& K0, const FracPowerSeries& s);

// J_mu(s, t) = int_0^t (t - tau)^{mu - 1} [D^mu s(tau) - D^mu s(0)] dtau
double j_mu(const FracPowerSeries& s, double mu, double t);

enum class Placement { Inside, Outside };

struct FdoTerm {
    double order;
    FracPowerSeries coeff;
    Placement placement;
};

class FdoSpec {
public:
    FdoSpec() = default;
    explicit FdoSpec(std::vector<FdoTerm> terms);

    const std::vector<FdoTerm>& terms() const noexcept { return terms_; }
    const FdoTerm& term(std::size_t i) const { return terms_.at(i); }
    const FdoTerm& leading() const { return terms_.front(); }
    std::size_t size() const noexcept { return terms_.size(); }

private:
    std::vector<FdoTerm> terms_;
};

// One FDO term applied to s with its order replaced by `order`.
FracPowerSeries apply_term(const FdoTerm& term, const FracPowerSeries& s, double order);
inline FracPowerSeries apply_term(const FdoTerm& term, const FracPowerSeries& s) {
    return apply_term(term, s, term.order);
}

FracPowerSeries apply_fdo(const FdoSpec& op, const FracPowerSeries& s);

nlohmann::json to_json(const FracPowerSeries& s);
FracPowerSeries series_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FdoSpec& op);
FdoSpec fdo_from_json(const nlohmann::json& j);

}  // namespace fracrecon

namespace fracrecon {

// Upper bounds on [0,T] derived term by term (triangle inequality):
// sup-norm, and the Holder seminorm of order `exponent` (infinite when some
// non-constant term is rougher than `exponent`).
double sup_norm_bound(const FracPowerSeries& s, double T);
double holder_seminorm_bound(const FracPowerSeries& s, double exponent, double T);

}  // namespace fracrecon
