#include "bdspec/km.hpp"

#include <cmath>
#include <complex>

#include "bdspec/polynomials.hpp"
#include "bdspec/special_functions.hpp"

namespace bdspec {

namespace {

constexpr double kDoublingBudget = 1e-6;

using lcplx = std::complex<long double>;

// The coupled transform matrix splits exactly as
//   Bhat = bp e1 e1^T + (lambda_{-1} bm / mu_0) u u^T / den,  u = (mu_0 bp, 1),
//   Bhat = (lambda_{-1} bm / mu_0) e2 e2^T + bp w w^T / den,  w = (1, lambda_{-1} bm),
// with den = 1 - lambda_{-1} mu_0 bp bm. The density is Im Bhat / pi. On pieces
// where one half-line transform is real, the other side's polynomials grow
// geometrically and only the Weyl combination (u.Q or w.Q) stays small;
// contracting through the split keeps that cancellation inside one extended-
// precision scalar instead of across three independently rounded density
// entries. Everything runs in extended precision: the potential coefficients
// amplify per-node roundoff by many orders at far row indices.
struct NodeForm {
    int kind;                // 0: bp real (use u), 1: bm real (use w), 2: both complex
    long double coef_im;     // kinds 0/1: Im of the rank-1 coefficient
    long double u1, u2;      // kinds 0/1: the real factor vector
    lcplx bp, lm_bm, den;    // kind 2
    long double mu0;
};

NodeForm node_form(const CatalogModel& model, double x) {
    NodeForm f;
    long double lm1 = model.lambda_m1();
    f.mu0 = model.mu_0();
    f.bp = halfline_transform_boundary_ld(model, Side::Plus, x);
    lcplx bm = halfline_transform_boundary_ld(model, Side::Minus, x);
    f.den = 1.0L - lm1 * f.mu0 * f.bp * bm;
    f.lm_bm = lm1 * bm;
    if (f.bp.imag() == 0.0L) {
        f.kind = 0;
        lcplx coef = (lm1 / f.mu0) * bm / f.den;
        f.coef_im = coef.imag();
        f.u1 = f.mu0 * f.bp.real();
        f.u2 = 1.0L;
    } else if (bm.imag() == 0.0L) {
        f.kind = 1;
        lcplx coef = f.bp / f.den;
        f.coef_im = coef.imag();
        f.u1 = 1.0L;
        f.u2 = f.lm_bm.real();
    } else {
        f.kind = 2;
    }
    return f;
}

// Im(qi^T Bhat qj) for one node (kind 2; kinds 0/1 go through weyl_combo).
long double contract(const NodeForm& f, long double qi1, long double qi2, long double qj1,
                     long double qj2) {
    if (f.kind != 2) {
        long double a = f.u1 * qi1 + f.u2 * qi2;
        long double b = f.u1 * qj1 + f.u2 * qj2;
        return f.coef_im * a * b;
    }
    lcplx wi = qi1 + f.lm_bm * qi2;
    lcplx wj = qj1 + f.lm_bm * qj2;
    lcplx full = (f.lm_bm / f.mu0) * (qi2 * qj2) + f.bp * wi * wj / f.den;
    return full.imag();
}

// Recurrence window in extended precision for the KM sums. The window always
// covers [-2, 2] so the geometric tail extensions below have a base.
void q_window_ld(const CatalogModel& model, double x, long lo, long hi,
                 std::vector<long double>& a, std::vector<long double>& b) {
    a.assign(hi - lo + 1, 0.0L);
    b.assign(hi - lo + 1, 0.0L);
    auto at = [lo](std::vector<long double>& v, long n) -> long double& { return v[n - lo]; };
    at(a, -1) = 0.0L;
    at(a, 0) = 1.0L;
    at(b, -1) = 1.0L;
    at(b, 0) = 0.0L;
    for (long n = 0; n < hi; ++n) {
        Rate r = model.rates_at(n);
        long double c = (long double)r.birth + r.death - x;
        at(a, n + 1) = (c * at(a, n) - r.death * at(a, n - 1)) / r.birth;
        at(b, n + 1) = (c * at(b, n) - r.death * at(b, n - 1)) / r.birth;
    }
    for (long n = -1; n > lo; --n) {
        Rate r = model.rates_at(n);
        long double c = (long double)r.birth + r.death - x;
        at(a, n - 1) = (c * at(a, n) - r.birth * at(a, n + 1)) / r.death;
        at(b, n - 1) = (c * at(b, n) - r.birth * at(b, n + 1)) / r.death;
    }
}

long double sigma_branch_ld(double birth, double death, double x) {
    long double sl = sqrtl((long double)birth), sm = sqrtl((long double)death);
    long double lo = (sl - sm) * (sl - sm), hi = (sl + sm) * (sl + sm);
    return (x <= lo) ? sqrtl((lo - x) * (hi - x)) : -sqrtl((x - lo) * (x - hi));
}

// Minimal-solution ratio of the constant-rate tail recurrence at a point x off
// that tail's spectral band; the Weyl combinations follow it exactly.
long double minimal_ratio_up(const CatalogModel& model, double x) {
    Rate r = model.rates_at(2);
    return ((long double)r.birth + r.death - x - sigma_branch_ld(r.birth, r.death, x)) /
           (2.0L * r.birth);
}
long double minimal_ratio_down(const CatalogModel& model, double x) {
    Rate r = model.rates_at(-2);
    return ((long double)r.birth + r.death - x - sigma_branch_ld(r.birth, r.death, x)) /
           (2.0L * r.death);
}

// g_n = v . Q_n(x) over [lo, hi] (window covering [-2,2]). The direct dot
// product cancels catastrophically at large |n| when v is an eigen-direction
// (atoms, and split pieces where one transform is real), so beyond |n| = 2 the
// decaying combination is continued by the exact geometric law of the
// constant-rate tails instead.
void weyl_combo(const CatalogModel& model, double x, long double v1, long double v2,
                bool geom_up, bool geom_down, const std::vector<long double>& q1,
                const std::vector<long double>& q2, long lo, long hi,
                std::vector<long double>& g) {
    g.resize(hi - lo + 1);
    long direct_hi = geom_up ? std::min<long>(2, hi) : hi;
    long direct_lo = geom_down ? std::max<long>(-2, lo) : lo;
    for (long n = direct_lo; n <= direct_hi; ++n)
        g[n - lo] = v1 * q1[n - lo] + v2 * q2[n - lo];
    if (geom_up && hi > 2) {
        long double r = minimal_ratio_up(model, x);
        for (long n = 3; n <= hi; ++n) g[n - lo] = g[n - 1 - lo] * r;
    }
    if (geom_down && lo < -2) {
        long double r = minimal_ratio_down(model, x);
        for (long n = -3; n >= lo; --n) g[n - lo] = g[n + 1 - lo] * r;
    }
}

// One pass of the KM integral for a whole row at fixed node count.
// Bilateral: value_n = pi_n * sum_pieces/atoms e^{-xt} Q_i(x)^T dPsi(x) Q_n(x).
std::vector<double> km_row_bilateral(const CatalogModel& model, const SpectralMatrix& s, long i,
                                     double t, long n_lo, long n_hi, int nodes) {
    const long count = n_hi - n_lo + 1;
    std::vector<long double> acc(count, 0.0L);
    const double xmin = s.support_min();
    const long lo = std::min<long>(std::min(i, n_lo), -2);
    const long hi = std::max<long>(std::max(i, n_hi), 2);
    std::vector<long double> q1, q2, g;
    for (const MatrixPiece& piece : s.pieces)
        for (const CosineNode& node : cosine_nodes(piece.a, piece.b, nodes)) {
            NodeForm f = node_form(model, node.x);
            const long double damp =
                (long double)node.weight / M_PI * expl(-((long double)node.x - xmin) * t);
            q_window_ld(model, node.x, lo, hi, q1, q2);
            if (f.kind != 2) {
                weyl_combo(model, node.x, f.u1, f.u2, f.kind == 0, f.kind == 1, q1, q2, lo, hi,
                           g);
                const long double scaled = damp * f.coef_im;
                const long double gi = g[i - lo];
                for (long n = n_lo; n <= n_hi; ++n)
                    acc[n - n_lo] += scaled * gi * g[n - lo];
            } else {
                const long double qi1 = q1[i - lo], qi2 = q2[i - lo];
                for (long n = n_lo; n <= n_hi; ++n)
                    acc[n - n_lo] += damp * contract(f, qi1, qi2, q1[n - lo], q2[n - lo]);
            }
        }
    // atoms contract in factored rank-1 form for the same reason
    for (const MatrixAtom& atom : s.atoms) {
        const long double damp =
            (long double)atom.scale * expl(-((long double)atom.location - xmin) * t);
        q_window_ld(model, atom.location, lo, hi, q1, q2);
        weyl_combo(model, atom.location, atom.v1, atom.v2, true, true, q1, q2, lo, hi, g);
        const long double vqi = g[i - lo];
        for (long n = n_lo; n <= n_hi; ++n) acc[n - n_lo] += damp * vqi * g[n - lo];
    }
    const double scale = std::exp(-xmin * t);
    std::vector<double> out(count);
    for (long n = n_lo; n <= n_hi; ++n)
        out[n - n_lo] = (double)(acc[n - n_lo] * scale * model.potential_coefficient(n));
    return out;
}

std::vector<double> km_row_halfline(const CatalogModel& model, const SpectralMeasure& s, long i,
                                    double t, long n_lo, long n_hi, int nodes) {
    if (n_lo < 0) throw OutOfDomain("half-line states must be >= 0");
    const long count = n_hi - n_lo + 1;
    std::vector<double> acc(count, 0.0);
    const double xmin = s.support_min();
    const long hi = std::max(i, n_hi);
    auto accumulate = [&](double x, double w) {
        const double damp = std::exp(-(x - xmin) * t);
        std::vector<double> q(hi + 1);
        double prev = 0.0, cur = 1.0;
        for (long k = 0; k <= hi; ++k) {
            q[k] = cur;
            Rate r = model.rates_at(k);
            double next = ((r.birth + r.death - x) * cur - r.death * prev) / r.birth;
            prev = cur;
            cur = next;
        }
        for (long n = n_lo; n <= n_hi; ++n) acc[n - n_lo] += damp * w * q[i] * q[n];
    };
    for (const ScalarPiece& piece : s.pieces)
        for (const CosineNode& node : cosine_nodes(piece.a, piece.b, nodes))
            accumulate(node.x, node.weight * piece.density(node.x));
    for (const ScalarAtom& atom : s.atoms) accumulate(atom.location, atom.weight);
    const double scale = std::exp(-xmin * t);
    for (long n = n_lo; n <= n_hi; ++n)
        acc[n - n_lo] *= scale * model.potential_coefficient(n);
    return acc;
}

std::vector<double> km_row(const CatalogModel& model, long i, double t, long n_lo, long n_hi,
                           int nodes) {
    if (model.state_space() == StateSpace::Bilateral) {
        SpectralMatrix s = spectral_matrix(model);
        return km_row_bilateral(model, s, i, t, n_lo, n_hi, nodes);
    }
    SpectralMeasure s = spectral_measure_halfline(model, Side::Plus);
    return km_row_halfline(model, s, i, t, n_lo, n_hi, nodes);
}

}  // namespace

std::vector<TransitionResult> transition_row(const CatalogModel& model, long i, double t,
                                             long n_lo, long n_hi, const QuadratureConfig& cfg) {
    if (t < 0.0) throw OutOfDomain("time must be >= 0");
    if (n_lo > n_hi) throw OutOfDomain("empty row window");
    const int nodes = std::max(cfg.nodes_per_piece, 16);
    std::vector<double> coarse = km_row(model, i, t, n_lo, n_hi, nodes);
    std::vector<double> fine = km_row(model, i, t, n_lo, n_hi, 2 * nodes);
    std::vector<TransitionResult> out(fine.size());
    for (size_t k = 0; k < fine.size(); ++k) {
        double err = std::fabs(fine[k] - coarse[k]);
        if (err > kDoublingBudget)
            throw NonConvergedQuadrature(
                "node doubling moved a transition probability by more than 1e-6");
        out[k] = {fine[k], TransitionMethod::Quadrature, err};
    }
    return out;
}

TransitionResult transition_probability(const CatalogModel& model, long i, long j, double t,
                                        const QuadratureConfig& cfg) {
    return transition_row(model, i, t, j, j, cfg)[0];
}

TransitionResult closed_form_transition(const CatalogModel& model, long i, long j, double t) {
    if (t < 0.0) throw OutOfDomain("time must be >= 0");
    const Params& p = model.params();
    const double l = p.lambda, m = p.mu;
    const double z = 2.0 * std::sqrt(l * m) * t;
    // e^{-(l+m)t} I_nu(z) = (e^{-z} I_nu(z)) e^{-sigma_- t}: nothing overflows.
    const double gap = t * (l + m - 2.0 * std::sqrt(l * m));
    switch (model.family()) {
        case Family::MM1Absorbing: {
            if (i < 0 || j < 0) throw OutOfDomain("half-line states must be >= 0");
            double bracket = bessel_i_scaled(std::labs(i - j), z) - bessel_i_scaled(i + j + 2, z);
            double value = std::pow(l / m, 0.5 * double(j - i)) * bracket * std::exp(-gap);
            return {value, TransitionMethod::ClosedFormBessel, 1e-13};
        }
        case Family::ConstantBilateral: {
            double value = std::pow(l / m, 0.5 * double(j - i)) *
                           bessel_i_scaled(std::labs(j - i), z) * std::exp(-gap);
            return {value, TransitionMethod::ClosedFormBessel, 1e-13};
        }
        default:
            throw NoClosedForm("no Bessel closed form for this family");
    }
}

namespace {

// Dual-route current at fixed node count: -integral e^{-xt} sum Q_j^a H_n^b dpsi_ab.
double current_dual_once(const CatalogModel& model, long j, long n, double t, int nodes) {
    if (model.state_space() == StateSpace::Bilateral) {
        SpectralMatrix s = spectral_matrix(model);
        const double xmin = s.support_min();
        const double lp = model.rates_at(n - 1).birth * model.potential_coefficient(n - 1);
        const long lo = std::min<long>(std::min(j, n - 1), -2);
        const long hi = std::max<long>(std::max(j, n), 2);
        std::vector<long double> q1, q2, g;
        double acc = 0.0;
        for (const MatrixPiece& piece : s.pieces)
            for (const CosineNode& node : cosine_nodes(piece.a, piece.b, nodes)) {
                NodeForm f = node_form(model, node.x);
                q_window_ld(model, node.x, lo, hi, q1, q2);
                const double damp =
                    node.weight / M_PI * std::exp(-(node.x - xmin) * t);
                if (f.kind != 2) {
                    weyl_combo(model, node.x, f.u1, f.u2, f.kind == 0, f.kind == 1, q1, q2, lo,
                               hi, g);
                    acc += damp * f.coef_im *
                           (double)(g[j - lo] * lp * (g[n - lo] - g[n - 1 - lo]));
                } else {
                    const long double h1 = lp * (q1[n - lo] - q1[n - 1 - lo]);
                    const long double h2 = lp * (q2[n - lo] - q2[n - 1 - lo]);
                    acc += damp * contract(f, q1[j - lo], q2[j - lo], h1, h2);
                }
            }
        for (const MatrixAtom& atom : s.atoms) {
            q_window_ld(model, atom.location, lo, hi, q1, q2);
            weyl_combo(model, atom.location, atom.v1, atom.v2, true, true, q1, q2, lo, hi, g);
            const long double vh = lp * (g[n - lo] - g[n - 1 - lo]);
            acc += atom.scale * std::exp(-(atom.location - xmin) * t) *
                   (double)(g[j - lo] * vh);
        }
        return -acc * std::exp(-xmin * t);
    }
    if (n < 0 || j < 0) throw OutOfDomain("half-line states must be >= 0");
    SpectralMeasure s = spectral_measure_halfline(model, Side::Plus);
    const double xmin = s.support_min();
    const double lp =
        n == 0 ? 0.0 : model.rates_at(n - 1).birth * model.potential_coefficient(n - 1);
    const long hi = std::max(j, n);
    double acc = 0.0;
    auto accumulate = [&](double x, double w) {
        std::vector<double> q(hi + 1);
        double prev = 0.0, cur = 1.0;
        for (long k = 0; k <= hi; ++k) {
            q[k] = cur;
            Rate r = model.rates_at(k);
            double next = ((r.birth + r.death - x) * cur - r.death * prev) / r.birth;
            prev = cur;
            cur = next;
        }
        double h = n == 0 ? model.rates_at(0).death : lp * (q[n] - q[n - 1]);
        acc += std::exp(-(x - xmin) * t) * w * q[j] * h;
    };
    for (const ScalarPiece& piece : s.pieces)
        for (const CosineNode& node : cosine_nodes(piece.a, piece.b, nodes))
            accumulate(node.x, node.weight * piece.density(node.x));
    for (const ScalarAtom& atom : s.atoms) accumulate(atom.location, atom.weight);
    return -acc * std::exp(-xmin * t);
}

}  // namespace

double probability_current(const CatalogModel& model, long j, long n, double t,
                           CurrentMethod method, const QuadratureConfig& cfg) {
    if (t < 0.0) throw OutOfDomain("time must be >= 0");
    if (method == CurrentMethod::Direct) {
        if (model.state_space() == StateSpace::HalfLine && n == 0) {
            // lambda_{-1} = 0 on the half line
            return -model.rates_at(0).death * transition_probability(model, j, 0, t, cfg).value;
        }
        std::vector<TransitionResult> row = transition_row(model, j, t, n - 1, n, cfg);
        return model.rates_at(n - 1).birth * row[0].value -
               model.rates_at(n).death * row[1].value;
    }
    const int nodes = std::max(cfg.nodes_per_piece, 16);
    double coarse = current_dual_once(model, j, n, t, nodes);
    double fine = current_dual_once(model, j, n, t, 2 * nodes);
    if (std::fabs(fine - coarse) > kDoublingBudget)
        throw NonConvergedQuadrature("node doubling moved a probability current by more than 1e-6");
    return fine;
}

double integrate_piece(const ScalarPiece& piece, const std::function<double(double)>& f,
                       const QuadratureConfig& cfg) {
    double acc = 0.0;
    for (const CosineNode& node : cosine_nodes(piece.a, piece.b, std::max(cfg.nodes_per_piece, 16)))
        acc += node.weight * f(node.x) * piece.density(node.x);
    return acc;
}

double integrate_piece(const MatrixPiece& piece, Component c,
                       const std::function<double(double)>& f, const QuadratureConfig& cfg) {
    double acc = 0.0;
    for (const CosineNode& node : cosine_nodes(piece.a, piece.b, std::max(cfg.nodes_per_piece, 16)))
        acc += node.weight * f(node.x) * piece.density(node.x).component(c);
    return acc;
}

}  // namespace bdspec
