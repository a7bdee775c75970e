#pragma once

#include <vector>

namespace bdspec {

/// Quadrature settings shared by the spectral integrals.
struct QuadratureConfig {
    int nodes_per_piece = 512;  // clamped to >= 16
};

/// Gauss-Legendre rule on [-1,1]; computed once per order and cached.
struct GaussLegendreRule {
    std::vector<double> node;
    std::vector<double> weight;
};
const GaussLegendreRule& gauss_legendre(int n);

/// One quadrature node for an interval [a,b] under the substitution
/// x = (a+b)/2 + ((b-a)/2) cos(theta), theta Gauss-Legendre on [0,pi].
/// `weight` already contains the Jacobian ((b-a)/2) sin(theta) and the
/// theta-weight, so  integral_a^b g(x) dx ~= sum weight_k g(x_k).
struct CosineNode {
    double x;
    double weight;
};

/// Cosine-substituted nodes for [a,b]; the sin(theta) Jacobian regularizes
/// (x-a)^{+-1/2} and (b-x)^{+-1/2} endpoint behavior, and no node ever lands
/// on an endpoint.
std::vector<CosineNode> cosine_nodes(double a, double b, int n);

}  // namespace bdspec
