#pragma once

#include <memory>
#include <vector>

namespace fracrecon::oracle {

enum class QuadKind { GaussLegendre, GaussJacobi };

// Nodes and weights on [0,1]. GaussJacobi integrates against (1-z)^singular_exponent;
// GaussLegendre has singular_exponent = 0.
struct QuadratureRule {
    QuadKind kind;
    std::vector<double> nodes;
    std::vector<double> weights;
    double singular_exponent;
};

using RulePtr = std::shared_ptr<const QuadratureRule>;

// Cached per (kind, n, exponent); safe to call concurrently.
RulePtr gauss_legendre(int n);
RulePtr gauss_jacobi(int n, double alpha);

// Applies `rule` on [a,b]; for a Jacobi rule the weight becomes ((b-x)/(b-a))^alpha.
template <class F>
double integrate(const QuadratureRule& rule, double a, double b, F&& f) {
    const double h = b - a;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(a + h * rule.nodes[i]);
    return h * s;
}

}  // namespace fracrecon::oracle
