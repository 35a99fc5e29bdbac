#include "fracrecon/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "fracrecon/error.hpp"
#include "fracrecon/specfun.hpp"

namespace fracrecon::oracle {

namespace {

// Golub-Welsch for the Jacobi weight (1-x)^alpha (1+x)^beta on [-1,1], mapped to [0,1].
QuadratureRule build_jacobi(int n, double alpha, double beta, QuadKind kind) {
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max(n - 1, 0));
    const double ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        if (k == 0)
            diag(k) = (beta - alpha) / (ab + 2.0);
        else
            diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
        const double den = s * s * (s + 1.0) * (s - 1.0);
        sub(k - 1) = std::sqrt(num / den);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) fail(ErrorCode::NoConvergence, "Golub-Welsch eigensolver failed");

    // Total mass of the weight on [0,1]: int_0^1 (1-z)^alpha z^beta dz.
    const double mu0 = specfun::beta(alpha + 1.0, beta + 1.0);
    QuadratureRule rule{kind, std::vector<double>(n), std::vector<double>(n), alpha};
    for (int i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        rule.nodes[i] = 0.5 * (1.0 + es.eigenvalues()(i));
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

struct Cache {
    std::mutex mu;
    std::map<std::tuple<int, int, double>, RulePtr> rules;
};

Cache& cache() {
    static Cache c;
    return c;
}

RulePtr lookup(QuadKind kind, int n, double alpha) {
    if (n < 1) fail(ErrorCode::Domain, "quadrature needs at least one node");
    if (!(alpha > -1.0)) fail(ErrorCode::Domain, "Jacobi exponent must exceed -1");
    Cache& c = cache();
    const auto key = std::make_tuple(static_cast<int>(kind), n, alpha);
    {
        std::lock_guard<std::mutex> lock(c.mu);
        auto it = c.rules.find(key);
        if (it != c.rules.end()) return it->second;
    }
    auto rule = std::make_shared<const QuadratureRule>(build_jacobi(n, alpha, 0.0, kind));
    std::lock_guard<std::mutex> lock(c.mu);
    return c.rules.emplace(key, std::move(rule)).first->second;
}

}  // namespace

RulePtr gauss_legendre(int n) { return lookup(QuadKind::GaussLegendre, n, 0.0); }

RulePtr gauss_jacobi(int n, double alpha) { return lookup(QuadKind::GaussJacobi, n, alpha); }

}  // namespace fracrecon::oracle
