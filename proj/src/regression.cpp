#include "fracrecon/regression.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fracrecon/error.hpp"
#include "fracrecon/kernels.hpp"
#include "fracrecon/quadrature.hpp"
#include "fracrecon/specfun.hpp"

namespace fracrecon {

double jacobi_shifted(int m, double a, double x) {
    if (m < 0) fail(ErrorCode::Domain, "negative Jacobi degree");
    double v = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double sign = ((m - i) % 2 == 0) ? 1.0 : -1.0;
        v += sign * specfun::binomial(m, i) * specfun::binomial(m - a + i, m) * std::pow(x, i);
    }
    return v;
}

double jacobi_product_form(int m, double a, double x) {
    if (m < 0) fail(ErrorCode::Domain, "negative Jacobi degree");
    double v = 0.0;
    for (int i = 0; i <= m; ++i)
        v += specfun::binomial(m, i) * specfun::binomial(m - a, m - i) * std::pow(x - 1.0, m - i) * std::pow(x, i);
    return v;
}

double jacobi_recurrence(int m, double a, double x) {
    if (m < 0) fail(ErrorCode::Domain, "negative Jacobi degree");
    // P_n^{(alpha,beta)}(y), alpha = 0, beta = -a, y = 2x - 1
    const double al = 0.0, be = -a, y = 2.0 * x - 1.0;
    double p0 = 1.0;
    if (m == 0) return p0;
    double p1 = (al + 1.0) + (al + be + 2.0) * (y - 1.0) / 2.0;
    for (int n = 2; n <= m; ++n) {
        const double s = 2.0 * n + al + be;
        const double c0 = 2.0 * n * (n + al + be) * (s - 2.0);
        const double c1 = (s - 1.0) * (s * (s - 2.0) * y + al * al - be * be);
        const double c2 = 2.0 * (n + al - 1.0) * (n + be - 1.0) * s;
        const double p2 = (c1 * p1 - c2 * p0) / c0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double RegressionModel::basis_value(std::size_t j, double t) const {
    if (j < betas.size()) return t == 0.0 ? 0.0 : std::pow(t, betas[j]);
    return jacobi_recurrence(static_cast<int>(j - betas.size()), weight_a, t / t_K);
}

RegressionModel build_basis(const std::vector<double>& betas, int jacobi_max_degree, double a, double t_K) {
    if (jacobi_max_degree > kMaxJacobiDegree)
        fail(ErrorCode::DegreeTooHigh, "Jacobi degree " + std::to_string(jacobi_max_degree) + " exceeds 12");
    if (jacobi_max_degree < 0) fail(ErrorCode::Domain, "negative Jacobi degree");
    if (!(a > 0.0 && a < 1.0)) fail(ErrorCode::Domain, "weight exponent must lie in (0,1)");
    if (!(t_K > 0.0 && t_K <= 1.0)) fail(ErrorCode::Domain, "t_K must lie in (0,1]");
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] > 0.0)) fail(ErrorCode::Domain, "power exponents must be positive");
        if (i > 0 && !(betas[i] > betas[i - 1])) fail(ErrorCode::Domain, "power exponents must increase");
    }
    RegressionModel m;
    m.betas = betas;
    m.jacobi_max_degree = jacobi_max_degree;
    m.weight_a = a;
    m.t_K = t_K;
    for (double b : betas) m.basis.push_back(FracPowerSeries::monomial(1.0, b));
    for (int deg = 0; deg <= jacobi_max_degree; ++deg) {
        std::vector<Term> terms;
        for (int i = 0; i <= deg; ++i) {
            const double sign = ((deg - i) % 2 == 0) ? 1.0 : -1.0;
            const double c = sign * specfun::binomial(deg, i) * specfun::binomial(deg - a + i, deg) * std::pow(t_K, -i);
            terms.push_back({c, static_cast<double>(i)});
        }
        m.basis.push_back(FracPowerSeries(std::move(terms)));
    }
    return m;
}

Eigen::MatrixXd gram_matrix(const RegressionModel& model) {
    const std::size_t P = model.size();
    const std::size_t I = model.betas.size();
    const double a = model.weight_a, tK = model.t_K;
    Eigen::MatrixXd H(P, P);
    // Polynomial entries by Gauss-Jacobi in x = t / t_K, exact up to rounding for the capped degrees.
    const int nodes = kMaxJacobiDegree + 4;
    const auto jac_rule = oracle::gauss_jacobi(nodes, -a);  // weight (1-z)^{-a}, z = 1 - x
    for (std::size_t l = 0; l < P; ++l) {
        for (std::size_t m = l; m < P; ++m) {
            double v;
            if (l < I && m < I) {
                const double e = model.betas[l] + model.betas[m] - a + 1.0;
                v = std::pow(tK, e) / e;
            } else if (l >= I && m >= I) {
                const int dl = static_cast<int>(l - I), dm = static_cast<int>(m - I);
                double s = 0.0;
                for (std::size_t k = 0; k < jac_rule->nodes.size(); ++k) {
                    const double x = 1.0 - jac_rule->nodes[k];
                    s += jac_rule->weights[k] * jacobi_recurrence(dl, a, x) * jacobi_recurrence(dm, a, x);
                }
                v = std::pow(tK, 1.0 - a) * s;
            } else {
                const double beta = model.betas[std::min(l, m)];
                const int deg = static_cast<int>(std::max(l, m) - I);
                const auto rule = oracle::gauss_jacobi(nodes, beta - a);
                double s = 0.0;
                for (std::size_t k = 0; k < rule->nodes.size(); ++k)
                    s += rule->weights[k] * jacobi_recurrence(deg, a, 1.0 - rule->nodes[k]);
                v = std::pow(tK, 1.0 - a + beta) * s;
            }
            H(l, m) = v;
            H(m, l) = v;
        }
    }
    return H;
}

TikhonovProblem::TikhonovProblem(const RegressionModel& model, const Observation& obs) : model_(model) {
    if (obs.times.empty() || obs.times.size() != obs.values.size())
        fail(ErrorCode::Domain, "observation needs matching, non-empty times and values");
    const std::size_t rows = obs.times.size() + 1;
    const std::size_t P = model.size();
    E_.resize(rows, P);
    psi_.resize(rows);
    psi_(0) = obs.psi0;
    for (std::size_t j = 0; j < P; ++j) E_(0, j) = model.basis_value(j, 0.0);
    for (std::size_t k = 0; k < obs.times.size(); ++k) {
        psi_(k + 1) = obs.values[k];
        for (std::size_t j = 0; j < P; ++j) E_(k + 1, j) = model.basis_value(j, obs.times[k]);
    }
    EtE_.resize(P, P);
    Etpsi_.resize(P);
    for (std::size_t l = 0; l < P; ++l) {
        const double* cl = E_.col(l).data();
        for (std::size_t m = l; m < P; ++m) {
            const double v = kernels::dot(cl, E_.col(m).data(), rows);
            EtE_(l, m) = v;
            EtE_(m, l) = v;
        }
        Etpsi_(l) = kernels::dot(cl, psi_.data(), rows);
    }
    H_ = gram_matrix(model);
}

TikhonovFit TikhonovProblem::fit(double sigma) const {
    if (!(sigma > 0.0)) fail(ErrorCode::Domain, "regularization parameter must be positive");
    const Eigen::MatrixXd A = EtE_ + sigma * H_;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) fail(ErrorCode::IllConditioned, "normal matrix is not numerically SPD");
    TikhonovFit f;
    f.sigma = sigma;
    f.q = llt.solve(Etpsi_);
    if (!f.q.allFinite()) fail(ErrorCode::IllConditioned, "normal-equation solve produced non-finite values");
    const double rc = llt.rcond();
    f.condition_estimate = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    f.residual_norm = (E_ * f.q - psi_).norm();
    std::vector<Term> terms;
    for (std::size_t j = 0; j < model_.size(); ++j)
        for (const Term& t : model_.basis[j].terms()) terms.push_back({f.q(j) * t.c, t.p});
    f.psi_fit = FracPowerSeries(std::move(terms));
    return f;
}

TikhonovFit tikhonov_fit(const RegressionModel& model, const Observation& obs, double sigma) {
    return TikhonovProblem(model, obs).fit(sigma);
}

nlohmann::json to_json(const TikhonovFit& fit) {
    nlohmann::json j;
    j["sigma"] = fit.sigma;
    j["q"] = std::vector<double>(fit.q.data(), fit.q.data() + fit.q.size());
    j["residual_norm"] = fit.residual_norm;
    j["condition_estimate"] = fit.condition_estimate;
    j["psi_fit"] = to_json(fit.psi_fit);
    return j;
}

}  // namespace fracrecon
