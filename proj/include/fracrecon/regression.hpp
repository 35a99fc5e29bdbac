#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fracrecon/fracseries.hpp"
#include "fracrecon/scenario.hpp"
#include "json.hpp"

namespace fracrecon {

inline constexpr int kMaxJacobiDegree = 12;

// P_m^{(0,-a)} at x = t / t_K, factorized monomial form.
double jacobi_shifted(int m, double a, double x);
// Same polynomial from the (x-1)^{m-i} x^i product form.
double jacobi_product_form(int m, double a, double x);
// Same polynomial from the three-term recurrence (used where accuracy matters).
double jacobi_recurrence(int m, double a, double x);

struct RegressionModel {
    std::vector<double> betas;
    int jacobi_max_degree = 0;
    double weight_a = 0.5;
    double t_K = 1.0;
    std::vector<FracPowerSeries> basis;  // powers first, then Jacobi degrees 0..m

    std::size_t size() const noexcept { return basis.size(); }
    // Value of basis function j at t, evaluated without going through monomials.
    double basis_value(std::size_t j, double t) const;
};

RegressionModel build_basis(const std::vector<double>& betas, int jacobi_max_degree, double a, double t_K);

// H_{lm} = int_0^{t_K} t^{-a} e_l e_m dt
Eigen::MatrixXd gram_matrix(const RegressionModel& model);

struct TikhonovFit {
    double sigma = 0.0;
    Eigen::VectorXd q;
    FracPowerSeries psi_fit;
    double residual_norm = 0.0;
    double condition_estimate = 0.0;
};

// Precomputed normal-equation blocks for one model and one data set; fits for many sigma
// values share it.
class TikhonovProblem {
public:
    TikhonovProblem(const RegressionModel& model, const Observation& obs);

    TikhonovFit fit(double sigma) const;

    const Eigen::MatrixXd& design() const noexcept { return E_; }
    const Eigen::MatrixXd& normal() const noexcept { return EtE_; }
    const Eigen::MatrixXd& gram() const noexcept { return H_; }
    const Eigen::VectorXd& rhs() const noexcept { return Etpsi_; }
    const Eigen::VectorXd& data() const noexcept { return psi_; }

private:
    RegressionModel model_;
    Eigen::MatrixXd E_;
    Eigen::MatrixXd EtE_;
    Eigen::MatrixXd H_;
    Eigen::VectorXd Etpsi_;
    Eigen::VectorXd psi_;
};

TikhonovFit tikhonov_fit(const RegressionModel& model, const Observation& obs, double sigma);

nlohmann::json to_json(const TikhonovFit& fit);

}  // namespace fracrecon
