#include "bdspec/polynomials.hpp"

#include <cmath>

#include "bdspec/special_functions.hpp"

namespace bdspec {

namespace {

void check_index(long n) {
    if (n > kMaxPolynomialIndex || n < -kMaxPolynomialIndex)
        throw OutOfDomain("polynomial index exceeds the |n| <= 64 recurrence window");
}

void check_alpha(int alpha) {
    if (alpha != 1 && alpha != 2) throw OutOfDomain("alpha must be 1 or 2");
}

double pow_half(double ratio, long k) { return std::pow(ratio, 0.5 * double(k)); }

}  // namespace

double eval_q_halfline(const CatalogModel& model, Side side, long n, double x) {
    if (n < 0) throw OutOfDomain("half-line polynomial index must be >= 0");
    check_index(n);
    double prev = 0.0;  // Q_{-1}
    double cur = 1.0;   // Q_0
    for (long k = 0; k < n; ++k) {
        Rate r = model.half_line_rates(side, k);
        double next = ((r.birth + r.death - x) * cur - r.death * prev) / r.birth;
        prev = cur;
        cur = next;
    }
    return cur;
}

void eval_q_bilateral_window(const CatalogModel& model, double x, long n_lo, long n_hi,
                             std::vector<double>& q1, std::vector<double>& q2) {
    if (model.state_space() != StateSpace::Bilateral)
        throw OutOfDomain("bilateral polynomials need a bilateral model");
    if (n_lo > n_hi) throw OutOfDomain("empty index window");
    check_index(n_lo);
    check_index(n_hi);
    long lo = std::min<long>(n_lo, -1);
    long hi = std::max<long>(n_hi, 0);
    std::vector<double> a(hi - lo + 1), b(hi - lo + 1);
    auto at = [lo](std::vector<double>& v, long n) -> double& { return v[n - lo]; };
    // initial pair at indices -1, 0
    at(a, -1) = 0.0;
    at(a, 0) = 1.0;
    at(b, -1) = 1.0;
    at(b, 0) = 0.0;
    for (long n = 0; n < hi; ++n) {  // forward: solve for Q_{n+1}
        Rate r = model.rates_at(n);
        at(a, n + 1) = ((r.birth + r.death - x) * at(a, n) - r.death * at(a, n - 1)) / r.birth;
        at(b, n + 1) = ((r.birth + r.death - x) * at(b, n) - r.death * at(b, n - 1)) / r.birth;
    }
    for (long n = -1; n > lo; --n) {  // backward: solve for Q_{n-1}
        Rate r = model.rates_at(n);
        at(a, n - 1) = ((r.birth + r.death - x) * at(a, n) - r.birth * at(a, n + 1)) / r.death;
        at(b, n - 1) = ((r.birth + r.death - x) * at(b, n) - r.birth * at(b, n + 1)) / r.death;
    }
    q1.resize(n_hi - n_lo + 1);
    q2.resize(n_hi - n_lo + 1);
    for (long n = n_lo; n <= n_hi; ++n) {
        q1[n - n_lo] = at(a, n);
        q2[n - n_lo] = at(b, n);
    }
}

double eval_q_bilateral(const CatalogModel& model, int alpha, long n, double x) {
    check_alpha(alpha);
    std::vector<double> q1, q2;
    eval_q_bilateral_window(model, x, n, n, q1, q2);
    return alpha == 1 ? q1[0] : q2[0];
}

double eval_dual_h(const CatalogModel& model, int alpha, long n, double x) {
    check_alpha(alpha);
    std::vector<double> q1, q2;
    eval_q_bilateral_window(model, x, n - 1, n, q1, q2);
    double lp = model.rates_at(n - 1).birth * model.potential_coefficient(n - 1);
    const std::vector<double>& q = (alpha == 1) ? q1 : q2;
    return lp * (q[1] - q[0]);
}

double eval_dual_h_halfline(const CatalogModel& model, Side side, long n, double x) {
    if (n < 0) throw OutOfDomain("half-line dual index must be >= 0");
    if (n == 0) return model.half_line_rates(side, 0).death;  // H_0 = mu_0
    // pi of the half-line factor, built from its own rates
    double pi = 1.0;
    for (long k = 1; k <= n - 1; ++k)
        pi *= model.half_line_rates(side, k - 1).birth / model.half_line_rates(side, k).death;
    double lam = model.half_line_rates(side, n - 1).birth;
    return lam * pi * (eval_q_halfline(model, side, n, x) - eval_q_halfline(model, side, n - 1, x));
}

namespace {

// Ex 2.2 / Ex 2.3 / section 5 share one template: M/M/1-type Chebyshev forms with
// per-side rate pairs (up = (lambda,mu), dn = (a,b) acting on negative states).
double queue_pair_closed(double up_l, double up_m, double dn_a, double dn_b, int alpha, long n,
                         double x) {
    if (n >= 0) {
        double y = (up_l + up_m - x) / (2.0 * std::sqrt(up_l * up_m));
        if (alpha == 1) return pow_half(up_m / up_l, n) * chebyshev_u(n, y);
        return -pow_half(up_m / up_l, n + 1) * chebyshev_u(n - 1, y);
    }
    long m = -n - 1;  // m >= 0
    double y = (dn_a + dn_b - x) / (2.0 * std::sqrt(dn_a * dn_b));
    if (alpha == 1) return -pow_half(dn_b / dn_a, m + 1) * chebyshev_u(m - 1, y);
    return pow_half(dn_b / dn_a, m) * chebyshev_u(m, y);
}

double alternating1_closed(double l, double m, int alpha, long n, double x) {
    double y = -1.0 + (2.0 * l - x) * (2.0 * m - x) / (2.0 * l * m);
    bool ev = (n % 2) == 0;
    if (n >= 0) {
        long k = ev ? n / 2 : (n - 1) / 2;
        if (alpha == 1)
            return ev ? (2.0 * y + 1.0) * chebyshev_u(k - 1, y) - chebyshev_u(k - 2, y)
                      : -(x - 2.0 * l) / l * chebyshev_u(k, y);
        return ev ? (x - 2.0 * m) / m * chebyshev_u(k - 1, y)
                  : -(2.0 * y + 1.0) * chebyshev_u(k - 1, y) + chebyshev_u(k - 2, y);
    }
    if (alpha == 1) {
        long k = ev ? (-n - 2) / 2 : (-n - 1) / 2;
        return ev ? -(2.0 * y + 1.0) * chebyshev_u(k - 1, y) + chebyshev_u(k - 2, y)
                  : (x - 2.0 * l) / l * chebyshev_u(k - 1, y);
    }
    long k = ev ? -n / 2 : (-n - 1) / 2;
    return ev ? -(x - 2.0 * m) / m * chebyshev_u(k - 1, y)
              : (2.0 * y + 1.0) * chebyshev_u(k - 1, y) - chebyshev_u(k - 2, y);
}

double alternating2_closed(double l, double m, int alpha, long n, double x) {
    if (n < 0) {
        // Q_{-n-1}^1 = Q_n^2 and Q_{-n-1}^2 = Q_n^1
        return alternating2_closed(l, m, alpha == 1 ? 2 : 1, -n - 1, x);
    }
    double w = l + m - x;
    double y = (w * w - l * l - m * m) / (2.0 * l * m);
    bool ev = (n % 2) == 0;
    long k = ev ? n / 2 : (n - 1) / 2;
    if (alpha == 1)
        return ev ? (2.0 * y + m / l) * chebyshev_u(k - 1, y) - chebyshev_u(k - 2, y)
                  : w / l * chebyshev_u(k, y);
    return ev ? (x - l - m) / l * chebyshev_u(k - 1, y)
              : -(m / l) * ((2.0 * y + l / m) * chebyshev_u(k - 1, y) - chebyshev_u(k - 2, y));
}

// Section 4 positive-side form; the negative side is M/M/1-type with the ratio
// (lambda/mu) for case 1 and (mu/lambda) for case 2.
double defect_closed(double l, double m, double l0, double m0, bool case1, int alpha, long n,
                     double x) {
    double y = (l + m - x) / (2.0 * std::sqrt(l * m));
    if (n >= 0) {
        if (alpha == 1) {
            double t = 2.0 * (l0 - l) / l0 * chebyshev_t(n, y) +
                       (2.0 * l - l0) / l0 * chebyshev_u(n, y) +
                       std::sqrt(l / m) * (l0 + m0 - l - m) / l0 * chebyshev_u(n - 1, y);
            return pow_half(m / l, n) * t;
        }
        return -(m0 / l0) * pow_half(m / l, n - 1) * chebyshev_u(n - 1, y);
    }
    long k = -n - 1;
    double ratio = case1 ? l / m : m / l;
    if (alpha == 1) return -pow_half(ratio, k + 1) * chebyshev_u(k - 1, y);
    return pow_half(ratio, k) * chebyshev_u(k, y);
}

}  // namespace

double eval_closed_form_q(const CatalogModel& model, int alpha, long n, double x) {
    const Params& p = model.params();
    switch (model.family()) {
        case Family::MM1Absorbing: {
            if (n < 0) throw OutOfDomain("mm1 closed form needs n >= 0");
            double y = (p.lambda + p.mu - x) / (2.0 * std::sqrt(p.lambda * p.mu));
            return pow_half(p.mu / p.lambda, n) * chebyshev_u(n, y);
        }
        case Family::ConstantBilateral:
            check_alpha(alpha);
            // A- carries the swapped pair, so the positive-side ratio inverts.
            return queue_pair_closed(p.lambda, p.mu, p.mu, p.lambda, alpha, n, x);
        case Family::SymmetricBilateral:
            check_alpha(alpha);
            return queue_pair_closed(p.lambda, p.mu, p.lambda, p.mu, alpha, n, x);
        case Family::AlternatingCase1:
            check_alpha(alpha);
            return alternating1_closed(p.lambda, p.mu, alpha, n, x);
        case Family::AlternatingCase2:
            check_alpha(alpha);
            return alternating2_closed(p.lambda, p.mu, alpha, n, x);
        case Family::DefectCase1:
            check_alpha(alpha);
            return defect_closed(p.lambda, p.mu, p.lambda0, p.mu0, true, alpha, n, x);
        case Family::DefectCase2:
            check_alpha(alpha);
            return defect_closed(p.lambda, p.mu, p.lambda0, p.mu0, false, alpha, n, x);
        case Family::SplitQueues:
            check_alpha(alpha);
            return queue_pair_closed(p.lambda, p.mu, p.alpha, p.beta, alpha, n, x);
    }
    throw NoClosedForm("no closed form for this model");
}

}  // namespace bdspec
