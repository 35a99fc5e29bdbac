#include "fracrecon/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracrecon/error.hpp"
#include "fracrecon/format.hpp"
#include "fracrecon/quadrature.hpp"
#include "fracrecon/specfun.hpp"

namespace fracrecon::oracle {

namespace {

constexpr int kDyadicLevels = 60;
constexpr int kMaxNodes = 1024;

// int_0^t (t-s)^alpha g(s) ds over panels [t/2, t] (Jacobi) and [t 2^{-k-1}, t 2^{-k}].
double endpoint_singular(const Fn& g, double alpha, double t, int n) {
    const double half = 0.5 * t;
    const RulePtr gj = gauss_jacobi(n, alpha);
    double v = std::pow(half, alpha) * integrate(*gj, half, t, g);
    const RulePtr gl = gauss_legendre(n);
    double hi = half;
    for (int k = 0; k < kDyadicLevels; ++k) {
        const double lo = 0.5 * hi;
        v += integrate(*gl, lo, hi, [&](double s) { return std::pow(t - s, alpha) * g(s); });
        hi = lo;
    }
    return v;
}

template <class Step>
double refine(Step&& step, int n0, double rtol, const char* what) {
    int n = std::max(2, n0);
    double prev = step(n);
    while (n < kMaxNodes) {
        n *= 2;
        const double cur = step(n);
        if (std::fabs(cur - prev) <= rtol * std::fabs(cur)) return cur;
        prev = cur;
    }
    std::ostringstream os;
    os << what << " did not converge with " << kMaxNodes << " nodes";
    fail(ErrorCode::NoConvergence, os.str());
}

double derivative(const Fn& f, double s) {
    const double h = 1e-4 * s;
    return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12 * h);
}

void check_time(double t, const char* what) {
    if (!(t > 0.0 && t <= 1.0)) fail(ErrorCode::Domain, std::string(what) + ": t must lie in (0,1]");
}

// [0, 1/2] split dyadically towards z = 0.
double left_half(const Fn& h, int n) {
    const RulePtr gl = gauss_legendre(n);
    double v = 0.0, hi = 0.5;
    for (int k = 0; k < kDyadicLevels; ++k) {
        const double lo = 0.5 * hi;
        v += integrate(*gl, lo, hi, h);
        hi = lo;
    }
    return v;
}

// int_{1/2}^1 (1-z)^{alpha} h(z) dz with dyadic panels towards z = 1 and a Jacobi tail.
double right_half(const Fn& h, double alpha, int n) {
    constexpr int levels = 30;
    const RulePtr gl = gauss_legendre(n);
    double v = 0.0, w = 0.5;
    for (int k = 0; k < levels; ++k) {
        const double a = 1.0 - w, b = 1.0 - 0.5 * w;
        v += integrate(*gl, a, b, [&](double z) { return std::pow(1.0 - z, alpha) * h(z); });
        w *= 0.5;
    }
    v += std::pow(w, alpha) * integrate(*gauss_jacobi(n, alpha), 1.0 - w, 1.0, h);
    return v;
}

}  // namespace

double caputo_quadrature(const Fn& f, double nu, double t, int npoints) {
    if (!(nu > 0.0 && nu < 1.0)) fail(ErrorCode::Domain, "caputo_quadrature: nu must lie in (0,1)");
    check_time(t, "caputo_quadrature");
    const double eps = std::ldexp(t, -(kDyadicLevels + 1));
    const double tail = std::pow(t, -nu) * (f(eps) - f(0.0));
    const Fn df = [&](double s) { return derivative(f, s); };
    const double v = refine([&](int n) { return endpoint_singular(df, -nu, t, n) + tail; }, npoints, 1e-8,
                            "caputo_quadrature");
    return v / specfun::gamma(1.0 - nu);
}

double convolution_quadrature(const Fn& K0, const Fn& u, double gamma, double t, int npoints) {
    if (!(gamma >= 0.0 && gamma < 1.0)) fail(ErrorCode::Domain, "convolution_quadrature: gamma must lie in [0,1)");
    check_time(t, "convolution_quadrature");
    const Fn g = [&](double s) { return K0(t - s) * u(s); };
    return refine([&](int n) { return endpoint_singular(g, -gamma, t, n); }, npoints, 1e-8,
                  "convolution_quadrature");
}

double g_script(const Fn& f, double g3, double n, double t) {
    if (!(g3 > 0.0 && g3 <= 1.0)) fail(ErrorCode::Domain, "g_script: gamma3 must lie in (0,1]");
    if (!(n > 0.0)) fail(ErrorCode::Domain, "g_script: n must be positive");
    if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::Domain, "g_script: t must lie in [0,1]");
    if (t == 0.0) return n * f(0.0) / specfun::gamma(1.0 + g3);
    const specfun::MLParams ml(g3, g3);
    const double x = n * std::pow(t, g3);
    const Fn full = [&](double z) {
        const double r = 1.0 - z;
        return std::pow(r, g3 - 1.0) * n * specfun::mittag_leffler(ml, -x * std::pow(r, g3)) * f(z * t);
    };
    const Fn fz = [&](double z) { return f(z * t); };
    auto step = [&](int m) {
        double v = left_half(full, m);
        if (x <= 1.0) {
            // Termwise expansion keeps every Jacobi weight exact on [1/2, 1].
            double sum = 0.0;
            int small = 0;
            for (int k = 0; k < 400 && small < 3; ++k) {
                const double a = g3 * (k + 1) - 1.0;
                const double coef = std::pow(-x, k) / specfun::gamma(g3 * (k + 1));
                const double term = coef * std::pow(0.5, a) * integrate(*gauss_jacobi(m, a), 0.5, 1.0, fz);
                sum += term;
                small = std::fabs(term) <= 1e-17 * std::fabs(sum) ? small + 1 : 0;
            }
            v += n * sum;
        } else {
            v += right_half(
                [&](double z) {
                    return n * specfun::mittag_leffler(ml, -x * std::pow(1.0 - z, g3)) * f(z * t);
                },
                g3 - 1.0, m);
        }
        return v;
    };
    return refine(step, 64, 1e-9, "g_script");
}

double g_general(const Fn& k, const Fn& f, double gs, double t) {
    if (!(gs > 0.0 && gs <= 1.0)) fail(ErrorCode::Domain, "g_general: exponent must lie in (0,1]");
    if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::Domain, "g_general: t must lie in [0,1]");
    if (t == 0.0) return k(0.0) * f(0.0) / gs;
    const Fn full = [&](double z) { return std::pow(1.0 - z, gs - 1.0) * k(t - z * t) * f(z * t); };
    const Fn smooth = [&](double z) { return k(t - z * t) * f(z * t); };
    return refine([&](int m) { return left_half(full, m) + right_half(smooth, gs - 1.0, m); }, 32, 1e-9,
                  "g_general");
}

nlohmann::json to_json(const LemmaReport& r) {
    return {{"lemma", r.lemma},   {"threshold", r.threshold}, {"bound", r.bound},
            {"max_lhs", r.max_lhs}, {"margin", r.margin},     {"points", r.points},
            {"passed", r.passed}, {"details", r.details}};
}

namespace {

[[noreturn]] void violated(const std::string& what) { fail(ErrorCode::HypothesisViolated, what); }

void require(bool ok, const std::string& what) {
    if (!ok) violated(what);
}

std::vector<double> sample_points(double threshold, int points) {
    require(points >= 2, "at least two sample points are needed");
    if (!(threshold > 1e-280)) fail(ErrorCode::Domain, "threshold " + shortest(threshold) + " is too small to sample");
    std::vector<double> ts(points);
    for (int j = 0; j < points; ++j) ts[j] = threshold * std::pow(10.0, -8.0 * j / (points - 1));
    return ts;
}

// Largest t <= T with |F| <= eps on [0, t], located on a 4096-point grid and refined by bisection.
double t_epsilon(const FracPowerSeries& F, double T, double eps) {
    constexpr int grid = 4096;
    double prev = 0.0;
    for (int i = 1; i <= grid; ++i) {
        const double t = T * i / grid;
        if (std::fabs(F.eval(t)) > eps) {
            double lo = prev, hi = t;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (std::fabs(F.eval(mid)) > eps ? hi : lo) = mid;
            }
            return lo;
        }
        prev = t;
    }
    return T;
}

FracPowerSeries without_constant(const FracPowerSeries& s) {
    std::vector<Term> ts;
    for (const Term& t : s.terms())
        if (std::fabs(t.p) > 1e-12) ts.push_back(t);
    return FracPowerSeries(ts);
}

void finish(LemmaReport& r) {
    r.margin = r.bound - r.max_lhs;
    r.passed = r.margin >= 0.0;
}

double holder_norm(const FracPowerSeries& s, double mu, double T) {
    return sup_norm_bound(s, T) + holder_seminorm_bound(s, mu, T);
}

double min_positive_exponent(const FracPowerSeries& s) {
    double m = std::numeric_limits<double>::infinity();
    for (const Term& t : s.terms())
        if (std::fabs(t.p) > 1e-12) m = std::min(m, t.p);
    return m;
}

void common_ranges(double T, double eps) {
    require(T > 0.0 && T < 1.0, "T* must lie in (0,1)");
    require(eps > 0.0 && eps < 1.0, "eps* must lie in (0,1)");
}

}  // namespace

LemmaReport check_log_perturbation(const LogPerturbationInput& in, int points) {
    common_ranges(in.T, in.eps);
    require(in.eps1 > 0.0, "eps1* must be positive");
    require(in.F.at_zero() == 0.0, "F must vanish at t = 0");
    LemmaReport r;
    r.lemma = "log_perturbation";
    const double te = t_epsilon(in.F, in.T, in.eps);
    r.threshold = std::min({in.T, te, std::pow(1.0 - in.eps, 1.0 / in.eps1)});
    r.bound = in.eps1;
    const double bound1 = std::fabs(std::log(1.0 - in.eps));
    double lhs1 = 0.0;
    for (double t : sample_points(r.threshold, points)) {
        const double l = std::fabs(std::log(std::fabs(1.0 + in.F.eval(t))));
        lhs1 = std::max(lhs1, l);
        r.max_lhs = std::max(r.max_lhs, l / std::fabs(std::log(t)));
    }
    r.points = points;
    finish(r);
    r.details = {{"t_eps", te}, {"log_bound", bound1}, {"max_abs_log", lhs1}};
    if (lhs1 > bound1) r.passed = false;
    r.margin = std::min(r.margin, bound1 - lhs1);
    return r;
}

LemmaReport check_log_lambda(const LogLambdaInput& in, int points) {
    common_ranges(in.T, in.eps);
    require(in.lambda > 0.0 && in.lambda < 1.0, "lambda must lie in (0,1)");
    require(in.eps2 > 0.0, "eps2* must be positive");
    require(in.eps < 1.0 - std::pow(in.lambda, in.eps2), "eps* must stay below 1 - lambda^eps2*");
    require(in.F.at_zero() == 0.0, "F must vanish at t = 0");
    LemmaReport r;
    r.lemma = "log_lambda";
    const double te = t_epsilon(in.F, in.T, in.eps);
    r.threshold = std::min(in.T, te);
    r.bound = in.eps2;
    const double ll = std::log(in.lambda);
    for (double t : sample_points(r.threshold, points))
        r.max_lhs = std::max(r.max_lhs, std::fabs(std::log(std::fabs(1.0 + in.F.eval(t))) / ll));
    r.points = points;
    r.details = {{"t_eps", te}};
    finish(r);
    return r;
}

LemmaReport check_leading_power(const LeadingPowerInput& in, int points) {
    common_ranges(in.T, in.eps);
    require(in.theta > 0.0 && in.theta <= 1.0, "theta must lie in (0,1]");
    require(in.theta_star > 0.0, "theta* must be positive");
    require(in.C1 != 0.0, "C1* must be non-zero");
    require(in.C2 > 0.0 && in.C2 >= std::fabs(in.c), "C2* must dominate the remainder coefficient");
    require(in.eps3 > 0.0 && in.eps3 < 1.0, "eps3* must lie in (0,1)");
    const double G = specfun::gamma_lower();
    const double a = std::fabs(in.C1);
    const double e = 2.0 / in.eps3;
    LemmaReport r;
    r.lemma = "leading_power";
    r.threshold = std::min({in.T, std::pow(a * G, e), std::pow(G / a, e), std::pow(1.0 - in.eps, e),
                            std::pow(a * in.eps / in.C2, 1.0 / in.theta_star)});
    r.bound = in.eps3;
    const double g1 = specfun::gamma(1.0 + in.theta);
    double lhs1 = 0.0;
    for (double t : sample_points(r.threshold, points)) {
        const double tt = std::pow(t, in.theta);
        const double w1 = in.c * std::pow(t, in.theta + in.theta_star);
        const double dw = in.C1 * tt / g1 + w1;
        lhs1 = std::max(lhs1, std::fabs(g1 * w1 / (tt * in.C1)));
        r.max_lhs = std::max(r.max_lhs, std::fabs(in.theta - std::log(std::fabs(dw)) / std::log(t)));
    }
    r.points = points;
    finish(r);
    r.details = {{"remainder_ratio", lhs1}, {"eps", in.eps}};
    r.margin = std::min(r.margin, in.eps - lhs1);
    r.passed = r.margin >= 0.0;
    return r;
}

LemmaReport check_order_recovery(const OrderRecoveryInput& in, int points) {
    common_ranges(in.T, in.eps);
    require(in.eps4 > 0.0 && in.eps4 < 1.0, "eps4* must lie in (0,1)");
    const std::size_t K = in.mu.size();
    require(K >= 1 && in.r.size() == K, "one coefficient per order is required");
    require(in.mu[0] > 0.0 && in.mu[0] < 1.0, "mu_0 must lie in (0,1)");
    for (std::size_t k = 1; k < K; ++k)
        require(in.mu[k] > 0.0 && in.mu[k] < in.mu[k - 1], "orders must decrease strictly");
    require(in.r[0] > 0.0, "r_0 must be positive");

    std::vector<FracPowerSeries> D;
    for (std::size_t k = 0; k < K; ++k) {
        FracPowerSeries d = caputo(in.v, in.mu[k]);
        require(d.empty() || d.min_exponent() >= -1e-12, "fractional derivatives of v must be continuous");
        D.push_back(std::move(d));
    }
    double mu_star = in.mu[0];
    for (const auto& d : D) mu_star = std::min(mu_star, min_positive_exponent(d));
    double nu_star = mu_star;
    for (std::size_t k = 1; k < K; ++k) nu_star = std::min(nu_star, in.mu[0] - in.mu[k]);

    const double G = specfun::gamma_lower();
    const double T = in.T;
    const double r0 = in.r[0];
    const double D0 = r0 * D[0].at_zero();
    require(D0 != 0.0, "the operator must not vanish on v at t = 0");
    double C3 = 0.0;
    double th2, th3, th5;
    const double e = 2.0 / in.eps4;
    if (!in.type_two) {
        double sr = 0.0, sh = 0.0;
        for (std::size_t k = 1; k < K; ++k) {
            sr += std::fabs(in.r[k]);
            sh += std::fabs(in.r[k]) * holder_seminorm_bound(D[k], mu_star, T);
        }
        C3 = holder_norm(D[0], mu_star, T) / G * (1.0 + sr / (r0 * G)) + sh / (r0 * G * G);
        th2 = std::pow(G * std::fabs(D0) / r0, e);
        th3 = std::pow(G * r0 / std::fabs(D0), e);
        th5 = std::pow(in.eps * std::fabs(D0) / (r0 * C3), 1.0 / nu_star);
    } else {
        C3 = r0 * holder_seminorm_bound(D[0], mu_star, T) / G;
        for (std::size_t k = 1; k < K; ++k) {
            const double rk = std::fabs(in.r[k]);
            C3 += rk * sup_norm_bound(D[0], T) / (G * G) + rk * holder_seminorm_bound(D[k], mu_star, T) / (G * G);
        }
        th2 = std::pow(G * std::fabs(D0), e);
        th3 = std::pow(G / std::fabs(D0), e);
        th5 = std::pow(in.eps * std::fabs(D0) / C3, 1.0 / nu_star);
    }
    LemmaReport r;
    r.lemma = in.type_two ? "order_recovery_II" : "order_recovery_I";
    r.threshold = std::min({T, th2, th3, std::pow(1.0 - in.eps, e), th5});
    r.bound = in.eps4;
    const FracPowerSeries dv = (in.type_two ? r0 : 1.0) * without_constant(in.v);
    for (double t : sample_points(r.threshold, points))
        r.max_lhs = std::max(r.max_lhs, std::fabs(in.mu[0] - std::log(std::fabs(dv.eval(t))) / std::log(t)));
    r.points = points;
    r.details = {{"mu_star", mu_star}, {"nu_star", nu_star}, {"C3", C3}, {"D0", D0}};
    finish(r);
    return r;
}

namespace {

double ratio_lhs(const std::function<double(double)>& G, double lambda, double t) {
    return std::fabs(std::log(std::fabs(G(lambda * t) / G(t))) / std::log(lambda));
}

}  // namespace

LemmaReport check_ml_average(const MLAverageInput& in, int points) {
    common_ranges(in.T, in.eps);
    require(in.g3 > 0.0 && in.g3 < 1.0, "gamma3 must lie in (0,1)");
    require(in.g4 > 0.0 && in.g4 < in.g3, "gamma4 must lie in (0, gamma3)");
    require(in.n > 0.0, "n must be positive");
    require(in.lambda > 0.0 && in.lambda < 1.0, "lambda must lie in (0,1)");
    require(in.eps5 > 0.0, "eps5* must be positive");
    require(in.eps < 1.0 - std::pow(in.lambda, in.eps5), "eps* must stay below 1 - lambda^eps5*");
    const double f0 = in.f.at_zero();
    require(f0 != 0.0, "f must not vanish at t = 0");
    const double sem = holder_seminorm_bound(in.f, in.g4, in.T);
    require(std::isfinite(sem), "f must be Holder continuous of order gamma4");
    const double G = specfun::gamma_lower();
    const double C6 = G * std::fabs(f0) * in.eps / (3.0 * specfun::gamma(in.g4) * (sem + in.n * std::fabs(f0)));
    LemmaReport r;
    r.lemma = "ml_average";
    r.threshold = std::min({in.T, std::pow(2.0 * in.n, -1.0 / in.g3), std::pow(C6 / (1.0 + in.n * C6), 1.0 / in.g4)});
    r.bound = in.eps5;
    const Fn f = [&](double s) { return in.f.eval(s); };
    const Fn Gf = [&](double t) { return g_script(f, in.g3, in.n, t); };
    for (double t : sample_points(r.threshold, points)) r.max_lhs = std::max(r.max_lhs, ratio_lhs(Gf, in.lambda, t));
    r.points = points;
    r.details = {{"C6", C6}, {"seminorm", sem}};
    finish(r);
    return r;
}

LemmaReport check_kernel_average(const KernelAverageInput& in, int points) {
    common_ranges(in.T, in.eps);
    require(in.gs > 0.0 && in.gs <= 1.0, "kernel exponent must lie in (0,1]");
    require(in.g3 > 0.0 && in.g3 <= 1.0 && in.g4 > 0.0 && in.g4 <= 1.0, "Holder orders must lie in (0,1]");
    require(in.lambda > 0.0 && in.lambda < 1.0, "lambda must lie in (0,1)");
    require(in.eps6 > 0.0, "eps6* must be positive");
    require(in.eps < 1.0 - std::pow(in.lambda, in.eps6), "eps* must stay below 1 - lambda^eps6*");
    const double f0 = in.f.at_zero(), k0 = in.k.at_zero();
    require(f0 != 0.0 && k0 != 0.0, "k and f must not vanish at t = 0");
    const double semk = holder_seminorm_bound(in.k, in.g3, in.T);
    const double semf = holder_seminorm_bound(in.f, in.g4, in.T);
    require(std::isfinite(semk) && std::isfinite(semf), "k and f must be Holder continuous");
    const double G = specfun::gamma_lower();
    const double denom = 3.0 * (std::fabs(f0) * semk + semf * sup_norm_bound(in.k, in.T));
    const double C7 = denom > 0.0 ? in.eps * std::fabs(f0) * std::fabs(k0) * G / denom
                                  : std::numeric_limits<double>::infinity();
    const double gbar = std::min(in.g3, in.g4);
    LemmaReport r;
    r.lemma = "kernel_average";
    r.threshold = std::min(in.T, std::pow(C7, 1.0 / gbar));
    r.bound = in.eps6;
    const Fn k = [&](double s) { return in.k.eval(s); };
    const Fn f = [&](double s) { return in.f.eval(s); };
    const Fn Gf = [&](double t) { return g_general(k, f, in.gs, t); };
    for (double t : sample_points(r.threshold, points)) r.max_lhs = std::max(r.max_lhs, ratio_lhs(Gf, in.lambda, t));
    r.points = points;
    r.details = {{"C7", std::isfinite(C7) ? nlohmann::json(C7) : nlohmann::json(nullptr)}};
    finish(r);
    return r;
}

}  // namespace fracrecon::oracle
