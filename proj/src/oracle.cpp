#include "bdspec/oracle.hpp"

#include <cmath>

namespace bdspec {

namespace {

double poisson_pmf(long k, double a) {
    return std::exp(double(k) * std::log(a) - a - std::lgamma(double(k) + 1.0));
}

// All catalog rate rules take their values on states near 0 (period <= 2 plus
// a possible defect), so this max is the global one.
double global_max_exit_rate(const CatalogModel& model) {
    double q = 0.0;
    long lo = model.state_space() == StateSpace::HalfLine ? 0 : -3;
    for (long n = lo; n <= 3; ++n) {
        Rate r = model.rates_at(n);
        q = std::max(q, r.birth + r.death);
    }
    return q;
}

}  // namespace

TruncatedGenerator truncated_generator(const CatalogModel& model, long n_lo, long n_hi) {
    if (n_lo >= n_hi) throw OutOfDomain("window needs n_lo < n_hi");
    if (model.state_space() == StateSpace::HalfLine && n_lo < 0)
        throw OutOfDomain("half-line window must start at a state >= 0");
    TruncatedGenerator g;
    g.n_lo = n_lo;
    g.n_hi = n_hi;
    long size = g.size();
    g.diag.resize(size);
    g.birth.resize(size);
    g.death.resize(size);
    for (long n = n_lo; n <= n_hi; ++n) {
        Rate r = model.rates_at(n);
        long k = n - n_lo;
        g.diag[k] = -(r.birth + r.death);
        g.birth[k] = r.birth;
        g.death[k] = r.death;
        g.q_max = std::max(g.q_max, r.birth + r.death);
    }
    return g;
}

double poisson_tail_above(long m, double a) {
    if (a <= 0.0) return 0.0;
    if (m < 0) return 1.0;
    if (double(m) < a + 6.0 * std::sqrt(a) ) {
        // complement of a short CDF; no cancellation worry this close to the bulk
        double cdf = 0.0;
        for (long k = 0; k <= m; ++k) cdf += poisson_pmf(k, a);
        return std::max(0.0, 1.0 - cdf);
    }
    double term = poisson_pmf(m + 1, a);
    double sum = term;
    for (long k = m + 1; k < m + 100000; ++k) {
        term *= a / double(k + 1);
        sum += term;
        if (term < 1e-20 * sum) break;
    }
    return sum;
}

double leakage_bound(const CatalogModel& model, long i, double t, long n_lo, long n_hi) {
    if (i < n_lo || i > n_hi) throw OutOfDomain("start state must lie inside the window");
    if (t == 0.0) return 0.0;
    double a = global_max_exit_rate(model) * t;
    // On the half line a window starting at 0 only leaks at the top: the state-0
    // row of the true generator is already exact (deaths there are absorption).
    long dist;
    if (model.state_space() == StateSpace::HalfLine && n_lo == 0)
        dist = n_hi - i;
    else
        dist = std::min(i - n_lo, n_hi - i);
    return poisson_tail_above(dist, a);
}

std::vector<TransitionResult> oracle_row(const CatalogModel& model, long i, double t, long n_lo,
                                         long n_hi, double tol, long max_states) {
    if (t < 0.0) throw OutOfDomain("time must be >= 0");
    if (n_lo > n_hi) throw OutOfDomain("empty row window");
    const bool halfline = model.state_space() == StateSpace::HalfLine;
    if (halfline && n_lo < 0) throw OutOfDomain("half-line states must be >= 0");

    // grow the window until the leakage budget holds
    const double a = global_max_exit_rate(model) * t;
    long w = (long)std::ceil(a + 12.0 * std::sqrt(a + 1.0) + 12.0);
    long lo, hi;
    for (;;) {
        lo = i - w;
        hi = i + w;
        if (halfline) lo = std::max<long>(lo, 0);
        lo = std::min(lo, n_lo - 1);
        hi = std::max(hi, n_hi + 1);
        if (halfline) lo = std::max<long>(lo, 0);
        if (hi - lo + 1 > max_states)
            throw WindowTooLarge("oracle window would exceed the configured state cap");
        if (leakage_bound(model, i, t, lo, hi) < 0.5 * tol) break;
        w += std::max<long>(8, w / 4);
    }
    const double leak = leakage_bound(model, i, t, lo, hi);

    TruncatedGenerator g = truncated_generator(model, lo, hi);
    const long size = g.size();
    const double q = g.q_max > 0.0 ? g.q_max : 1.0;
    const double qa = q * t;

    // row vector u_k = e_i S^k, S = I + A/q; accumulate sum_k pois(k) u_k.
    std::vector<double> u(size, 0.0), next(size, 0.0), acc(size, 0.0);
    u[i - lo] = 1.0;
    double tail = 1.0;
    double pois = poisson_pmf(0, qa);
    if (qa == 0.0) pois = 1.0;
    for (long k = 0;; ++k) {
        for (long m = 0; m < size; ++m) acc[m] += pois * u[m];
        tail -= pois;
        if (tail < 0.5 * tol || qa == 0.0) break;
        // u <- u S (S^T acting on the column picture): (uS)_j = u_j S_jj + u_{j-1} S_{j-1,j} + u_{j+1} S_{j+1,j}
        for (long m = 0; m < size; ++m) {
            double v = u[m] * (1.0 + g.diag[m] / q);
            if (m > 0) v += u[m - 1] * g.birth[m - 1] / q;
            if (m + 1 < size) v += u[m + 1] * g.death[m + 1] / q;
            next[m] = v;
        }
        std::swap(u, next);
        pois *= qa / double(k + 1);
        if (k > 100000) throw NonConvergedQuadrature("uniformization series failed to terminate");
    }

    std::vector<TransitionResult> out(n_hi - n_lo + 1);
    for (long n = n_lo; n <= n_hi; ++n) {
        double value = (n >= lo && n <= hi) ? acc[n - lo] : 0.0;
        out[n - n_lo] = {value, TransitionMethod::Oracle, std::max(tail, 0.0) + leak};
    }
    return out;
}

TransitionResult oracle_transition(const CatalogModel& model, long i, long j, double t, double tol,
                                   long max_states) {
    if (model.state_space() == StateSpace::HalfLine && (i < 0 || j < 0))
        throw OutOfDomain("half-line states must be >= 0");
    return oracle_row(model, i, t, j, j, tol, max_states)[0];
}

}  // namespace bdspec
