#pragma once

#include <vector>

#include "bdspec/model.hpp"
#include "bdspec/quadrature.hpp"
#include "bdspec/spectral.hpp"

namespace bdspec {

enum class TransitionMethod { Quadrature, ClosedFormBessel, Oracle };

/// A transition probability with its provenance and an error estimate
/// (node-doubling difference for quadrature, tail+leakage bound for the oracle).
struct TransitionResult {
    double value = 0.0;
    TransitionMethod method = TransitionMethod::Quadrature;
    double err_estimate = 0.0;
};

/// P_ij(t) by the Karlin-McGregor integral over the model's spectral data.
/// Throws NonConvergedQuadrature if node doubling moves the value by > 1e-6.
TransitionResult transition_probability(const CatalogModel& model, long i, long j, double t,
                                        const QuadratureConfig& cfg = {});

/// A whole row P_i,n(t), n = n_lo..n_hi, sharing one quadrature pass.
std::vector<TransitionResult> transition_row(const CatalogModel& model, long i, double t,
                                             long n_lo, long n_hi,
                                             const QuadratureConfig& cfg = {});

/// The paper's Bessel closed forms (absorbing M/M/1 and the constant-rate
/// bilateral process). Throws NoClosedForm for other families.
TransitionResult closed_form_transition(const CatalogModel& model, long i, long j, double t);

enum class CurrentMethod {
    Direct,  // lambda_{n-1} P_{j,n-1}(t) - mu_n P_{j,n}(t)
    Dual,    // single spectral integral against the dual polynomials
};

/// Probability current Omega_{j,n}(t): net probability flux from state n-1
/// to state n at time t, started from j. The two methods agree to ~1e-8.
double probability_current(const CatalogModel& model, long j, long n, double t,
                           CurrentMethod method = CurrentMethod::Direct,
                           const QuadratureConfig& cfg = {});

/// integral_a^b f(x) density(x) dx over one AC piece by the cosine-substituted
/// Gauss-Legendre rule (matrix pieces integrate one component).
double integrate_piece(const ScalarPiece& piece, const std::function<double(double)>& f,
                       const QuadratureConfig& cfg = {});
double integrate_piece(const MatrixPiece& piece, Component c,
                       const std::function<double(double)>& f,
                       const QuadratureConfig& cfg = {});

}  // namespace bdspec
