#include "fracrecon/reconstruct.hpp"

#include <cmath>

#include "fracrecon/error.hpp"

namespace fracrecon {

double nu1_estimate(const EstimatorInput& inp, double t_bar) {
    if (!(t_bar > 0.0) || !(t_bar < 1.0)) fail(ErrorCode::Domain, "t_bar must lie in (0,1)");
    const FdoTerm& lead = inp.data->fdo.leading();
    // Subtracting as series merges the constant terms exactly before evaluation.
    FracPowerSeries diff;
    if (lead.placement == Placement::Outside)
        diff = inp.psi - FracPowerSeries::constant(inp.psi0);
    else
        diff = multiply(lead.coeff, inp.psi) - FracPowerSeries::constant(lead.coeff.at_zero() * inp.psi0);
    const double v = diff.eval(t_bar);
    if (v == 0.0) fail(ErrorCode::LogOfZero, "leading-order estimator hits an exact zero");
    return std::log(std::fabs(v)) / std::log(t_bar);
}

AuxAssembler::AuxAssembler(const ProblemData& data, FracPowerSeries psi) : data_(&data), psi_(std::move(psi)) {
    const FdoSpec& op = data.fdo;
    const FracPowerSeries src = data.G + multiply(data.a0, psi_) - data.I;
    FracPowerSeries known_nu, known_gamma;
    for (std::size_t i = 1; i < op.size(); ++i) {
        const FracPowerSeries term = apply_term(op.term(i), psi_);
        known_gamma = known_gamma + term;
        if (i + 1 != data.i_star) known_nu = known_nu + term;
    }
    if (data.kind == ProblemKind::FIP) nu_base_ = c_nu(data, psi_) - known_nu;
    gamma_base_ = src - known_gamma;
}

FracPowerSeries AuxAssembler::f_nu_series(double nu1_hat) const {
    return nu_base_ - apply_term(data_->fdo.leading(), psi_, nu1_hat);
}

FracPowerSeries AuxAssembler::f_gamma_series(double nu1_hat) const {
    return gamma_base_ - apply_term(data_->fdo.leading(), psi_, nu1_hat);
}

double AuxAssembler::f_nu_normalizer(double t) const {
    if (data_->kind != ProblemKind::FIP || data_->i_star < 2) fail(ErrorCode::Domain, "F_nu needs a minor-order index");
    const FdoTerm& term = data_->fdo.term(data_->i_star - 1);
    if (term.placement == Placement::Inside) return 1.0;
    return term.coeff.eval(t);
}

double AuxAssembler::f_nu(double nu1_hat, double t) const {
    const double rho = f_nu_normalizer(t);
    if (rho == 0.0) fail(ErrorCode::DivisionByZero, "rho_{i*}(t) = 0");
    return f_nu_series(nu1_hat).eval(t) / rho;
}

double AuxAssembler::f_gamma(double nu1_hat, double t) const { return f_gamma_series(nu1_hat).eval(t); }

double f_nu(const EstimatorInput& inp, double nu1_hat, double t) {
    return AuxAssembler(*inp.data, inp.psi).f_nu(nu1_hat, t);
}

double f_gamma(const EstimatorInput& inp, double nu1_hat, double t) {
    return AuxAssembler(*inp.data, inp.psi).f_gamma(nu1_hat, t);
}

double second_estimate(const AuxAssembler& aux, ProblemKind kind, double nu1_hat, double t_bar, double ratio_step) {
    if (!(ratio_step > 0.0 && ratio_step < 1.0)) fail(ErrorCode::Domain, "ratio step must lie in (0,1)");
    double num, den;
    if (kind == ProblemKind::FIP) {
        const FracPowerSeries s = aux.f_nu_series(nu1_hat);
        const double r1 = aux.f_nu_normalizer(ratio_step * t_bar), r0 = aux.f_nu_normalizer(t_bar);
        if (r1 == 0.0 || r0 == 0.0) fail(ErrorCode::DivisionByZero, "rho_{i*} vanishes on the ratio points");
        num = s.eval(ratio_step * t_bar) / r1;
        den = s.eval(t_bar) / r0;
    } else {
        const FracPowerSeries s = aux.f_gamma_series(nu1_hat);
        num = s.eval(ratio_step * t_bar);
        den = s.eval(t_bar);
    }
    if (num == 0.0 || den == 0.0 || !std::isfinite(num) || !std::isfinite(den))
        fail(ErrorCode::RatioDegenerate, "auxiliary function vanishes or is not finite");
    const double lg = std::log(std::fabs(num / den)) / std::log(ratio_step);
    return kind == ProblemKind::FIP ? nu1_hat - lg : 1.0 - lg;
}

double second_estimate(const EstimatorInput& inp, double nu1_hat, double t_bar, double ratio_step) {
    return second_estimate(AuxAssembler(*inp.data, inp.psi), inp.data->kind, nu1_hat, t_bar, ratio_step);
}

ParamPair prelimit_exact(const Scenario& s, double t_a, double lambda_or_mu) {
    const EstimatorInput inp{&s.data, s.psi_exact, s.data.psi0};
    const double n1 = nu1_estimate(inp, t_a);
    return {n1, second_estimate(inp, n1, t_a, lambda_or_mu), s.data.kind};
}

}  // namespace fracrecon
