#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracrecon/fracseries.hpp"
#include "json.hpp"

namespace fracrecon::oracle {

using Fn = std::function<double(double)>;

// Caputo derivative of order nu in (0,1) at t in (0,1], from the derivative form
// (1/Gamma(1-nu)) int_0^t (t-s)^{-nu} f'(s) ds. f' is a five-point difference with a
// step proportional to s. The node count per panel doubles from `npoints` until two
// successive values agree to 1e-8 (relative); NoConvergence after 1024.
double caputo_quadrature(const Fn& f, double nu, double t, int npoints = 16);

// int_0^t (t-s)^{-gamma} K0(t-s) u(s) ds, same panel layout as caputo_quadrature.
double convolution_quadrature(const Fn& K0, const Fn& u, double gamma, double t, int npoints = 16);

// int_0^1 (1-z)^{g3-1} n E_{g3,g3}(-n t^{g3} (1-z)^{g3}) f(zt) dz.
double g_script(const Fn& f, double g3, double n, double t);

// int_0^1 (1-z)^{gs-1} k(t - zt) f(zt) dz.
double g_general(const Fn& k, const Fn& f, double gs, double t);

struct LemmaReport {
    std::string lemma;
    double threshold = 0.0;
    double bound = 0.0;
    double max_lhs = 0.0;
    double margin = 0.0;
    int points = 0;
    bool passed = false;
    nlohmann::json details;
};

nlohmann::json to_json(const LemmaReport& r);

// Every check samples `points` log-spaced times in (0, threshold] and compares the
// left-hand side against the claimed bound. Invalid hypotheses throw HypothesisViolated.

// |ln|1+F|| <= |ln(1-eps)| up to t_eps, and |ln|1+F|| / |ln t| <= eps1 up to t1.
struct LogPerturbationInput {
    FracPowerSeries F;  // F(0) = 0
    double T = 0.9;
    double eps = 0.1;
    double eps1 = 0.1;
};
LemmaReport check_log_perturbation(const LogPerturbationInput& in, int points = 100);

// |log_lambda|1+F|| <= eps2 on [0, t_eps] when eps < 1 - lambda^eps2.
struct LogLambdaInput {
    FracPowerSeries F;
    double T = 0.9;
    double eps = 0.01;
    double eps2 = 0.1;
    double lambda = 0.9;
};
LemmaReport check_log_lambda(const LogLambdaInput& in, int points = 100);

// w(t) = w0 + C1 t^theta / Gamma(1+theta) + c t^{theta+theta_star}.
struct LeadingPowerInput {
    double w0 = 0.0;
    double C1 = 1.0;
    double theta = 0.5;
    double c = 0.0;
    double theta_star = 0.5;
    double C2 = 0.0;  // must dominate |c|
    double T = 0.9;
    double eps = 0.1;
    double eps3 = 0.1;
};
LemmaReport check_leading_power(const LeadingPowerInput& in, int points = 100);

// Multi-term operator with constant coefficients r[0] > 0, r[1..] applied to v:
// type I sum r_k D^{mu_k} v, type II sum D^{mu_k}(r_k v).
struct OrderRecoveryInput {
    std::vector<double> mu;  // strictly decreasing, mu[0] is the leading order
    std::vector<double> r;
    FracPowerSeries v;
    bool type_two = false;
    double T = 0.9;
    double eps = 0.1;
    double eps4 = 0.1;
};
LemmaReport check_order_recovery(const OrderRecoveryInput& in, int points = 100);

// |log_lambda|G_f(lambda t)/G_f(t)|| <= eps5 for the Mittag-Leffler average.
struct MLAverageInput {
    double g3 = 0.5;
    double n = 1.0;
    FracPowerSeries f;
    double g4 = 0.25;  // Holder order of f, below g3
    double lambda = 0.9;
    double eps = 0.005;
    double eps5 = 0.1;
    double T = 0.9;
};
LemmaReport check_ml_average(const MLAverageInput& in, int points = 100);

// |log_lambda|G_f(lambda t)/G_f(t)|| < eps6 for the kernel average.
struct KernelAverageInput {
    double gs = 0.5;
    FracPowerSeries k;
    double g3 = 0.5;  // Holder order of k
    FracPowerSeries f;
    double g4 = 0.5;  // Holder order of f
    double lambda = 0.9;
    double eps = 0.005;
    double eps6 = 0.1;
    double T = 0.9;
};
LemmaReport check_kernel_average(const KernelAverageInput& in, int points = 100);

}  // namespace fracrecon::oracle
