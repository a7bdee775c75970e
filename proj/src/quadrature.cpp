#include "bdspec/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "bdspec/errors.hpp"

namespace bdspec {

namespace {

GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule r;
    r.node.resize(n);
    r.weight.resize(n);
    for (int k = 0; k < n; ++k) {
        // Newton on P_n from the Tricomi-style initial guess
        double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        r.node[k] = x;
        r.weight[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

std::vector<CosineNode> cosine_nodes(double a, double b, int n) {
    if (!(b > a)) throw OutOfDomain("cosine_nodes: need a < b");
    n = std::max(n, 16);
    const GaussLegendreRule& gl = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double rad = 0.5 * (b - a);
    std::vector<CosineNode> out(n);
    for (int k = 0; k < n; ++k) {
        double theta = 0.5 * M_PI * (gl.node[k] + 1.0);
        double wtheta = 0.5 * M_PI * gl.weight[k];
        out[k].x = mid + rad * std::cos(theta);
        out[k].weight = wtheta * rad * std::sin(theta);
    }
    return out;
}

}  // namespace bdspec
