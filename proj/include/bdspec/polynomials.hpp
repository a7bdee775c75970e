#pragma once

#include <vector>

#include "bdspec/model.hpp"

namespace bdspec {

/// Largest |n| the recurrence evaluators accept. Off the spectral support the
/// polynomials grow geometrically in n; callers needing large n inside the
/// support should use the closed forms.
inline constexpr long kMaxPolynomialIndex = 64;

/// Q_n(x) of the half-line factor (A+ or A-), n >= 0, by the forward
/// three-term recurrence from Q_{-1} = 0, Q_0 = 1.
double eval_q_halfline(const CatalogModel& model, Side side, long n, double x);

/// Bilateral Q_n^alpha(x), alpha in {1,2}, any integer n: forward recurrence
/// for n >= 1, backward for n <= -2, marching away from the initial pair at
/// indices -1, 0.
double eval_q_bilateral(const CatalogModel& model, int alpha, long n, double x);

/// Both bilateral families over an index window in one recurrence sweep.
/// q1/q2 are filled with Q_n^1, Q_n^2 for n = n_lo..n_hi.
void eval_q_bilateral_window(const CatalogModel& model, double x, long n_lo, long n_hi,
                             std::vector<double>& q1, std::vector<double>& q2);

/// Dual polynomial H_n^alpha(x) = lambda_{n-1} pi_{n-1} [Q_n^alpha - Q_{n-1}^alpha]
/// for a bilateral model, any integer n.
double eval_dual_h(const CatalogModel& model, int alpha, long n, double x);

/// Half-line dual: H_0 = mu_0, H_{n+1} = lambda_n pi_n [Q_{n+1} - Q_n], n >= 0.
double eval_dual_h_halfline(const CatalogModel& model, Side side, long n, double x);

/// The paper's closed form for Q_n^alpha(x) (all catalog families have one).
/// For the half-line M/M/1 model alpha is ignored and n must be >= 0.
double eval_closed_form_q(const CatalogModel& model, int alpha, long n, double x);

}  // namespace bdspec
