#pragma once

#include <vector>

#include "bdspec/km.hpp"
#include "bdspec/model.hpp"

namespace bdspec {

/// Tridiagonal restriction of the infinitesimal generator to a state window.
/// Boundary rows keep their full diagonal, so outward flux leaks (the
/// truncation is sub-stochastic), giving a one-sided error bound.
struct TruncatedGenerator {
    long n_lo = 0;
    long n_hi = 0;
    std::vector<double> diag;   // A_{n,n} = -(lambda_n + mu_n)
    std::vector<double> birth;  // A_{n,n+1} = lambda_n (last entry unused)
    std::vector<double> death;  // A_{n,n-1} = mu_n    (first entry unused)
    double q_max = 0.0;         // max exit rate in the window

    long size() const { return n_hi - n_lo + 1; }
};

TruncatedGenerator truncated_generator(const CatalogModel& model, long n_lo, long n_hi);

/// P(N > m) for N ~ Poisson(a).
double poisson_tail_above(long m, double a);

/// Upper bound on the probability that the chain started at i touches the
/// window boundary by time t: the Poisson(q_max t) tail beyond the jump
/// distance to the nearest leaking boundary.
double leakage_bound(const CatalogModel& model, long i, double t, long n_lo, long n_hi);

/// Ground-truth transition probability by uniformization of the truncated
/// generator. The window is sized so leakage < tol/2 and the Poisson series
/// is truncated when its tail < tol/2; err_estimate reports both.
/// Throws WindowTooLarge if more than `max_states` states would be needed.
TransitionResult oracle_transition(const CatalogModel& model, long i, long j, double t,
                                   double tol = 1e-8, long max_states = 4096);

/// Whole-row oracle sharing one uniformization sweep.
std::vector<TransitionResult> oracle_row(const CatalogModel& model, long i, double t, long n_lo,
                                         long n_hi, double tol = 1e-8, long max_states = 4096);

}  // namespace bdspec
