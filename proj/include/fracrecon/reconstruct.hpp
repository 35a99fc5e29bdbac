#pragma once

#include "fracrecon/fracseries.hpp"
#include "fracrecon/scenario.hpp"

namespace fracrecon {

struct EstimatorInput {
    const ProblemData* data;  // known coefficients, kernel, sources, FDO layout
    FracPowerSeries psi;      // fitted or exact observation
    double psi0;
};

struct ParamPair {
    double nu1;
    double second;
    ProblemKind kind;
};

double nu1_estimate(const EstimatorInput& inp, double t_bar);

// Series parts of F_nu and F_gamma that do not depend on the estimated leading order;
// built once per psi and reused across t_bar.
class AuxAssembler {
public:
    AuxAssembler(const ProblemData& data, FracPowerSeries psi);

    // Numerator series of F_nu (before the rho_{i*} division) at leading order nu1_hat.
    FracPowerSeries f_nu_series(double nu1_hat) const;
    FracPowerSeries f_gamma_series(double nu1_hat) const;

    double f_nu(double nu1_hat, double t) const;
    double f_gamma(double nu1_hat, double t) const;

    // rho_{i*}(t) if term i* sits outside its derivative, otherwise 1.
    double f_nu_normalizer(double t) const;

private:
    const ProblemData* data_;
    FracPowerSeries psi_;
    FracPowerSeries nu_base_;     // C_nu - sum over known-order terms (i != 1, i*)
    FracPowerSeries gamma_base_;  // G + a0 psi - I - sum over terms i >= 2
};

double f_nu(const EstimatorInput& inp, double nu1_hat, double t);
double f_gamma(const EstimatorInput& inp, double nu1_hat, double t);

// FIP: nu1_hat - log_step |F_nu(step t)/F_nu(t)|; SIP: 1 - log_step |F_gamma(step t)/F_gamma(t)|.
double second_estimate(const AuxAssembler& aux, ProblemKind kind, double nu1_hat, double t_bar, double ratio_step);
double second_estimate(const EstimatorInput& inp, double nu1_hat, double t_bar, double ratio_step);

ParamPair prelimit_exact(const Scenario& s, double t_a, double lambda_or_mu);

}  // namespace fracrecon
