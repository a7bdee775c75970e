#include "bdspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace bdspec {

namespace {

using cplx = std::complex<double>;

constexpr double kEqTol = 1e-12;

bool rel_eq(double a, double b) {
    return std::fabs(a - b) <= kEqTol * std::max(std::fabs(a), std::fabs(b));
}

double sq(double v) { return v * v; }

// Principal square root of v + i0 (upper edge of the cut).
template <typename F>
std::complex<F> upper_sqrt(F v) {
    using std::sqrt;
    return v >= F(0) ? std::complex<F>(sqrt(v), F(0)) : std::complex<F>(F(0), sqrt(-v));
}

struct Endpoints {
    double lo, hi;  // (sqrt(l) -+ sqrt(m))^2
};
Endpoints sigma_pts(double l, double m) {
    return {sq(std::sqrt(l) - std::sqrt(m)), sq(std::sqrt(l) + std::sqrt(m))};
}

// M/M/1 transform (lambda+mu-z-sqrt((lambda+mu-z)^2-4 lambda mu))/(2 lambda mu), on the
// branch that is positive below the support and Nevanlinna in the upper half plane.
template <typename F>
std::complex<F> mm1_transform_t(F l, F m, F x) {
    using std::sqrt;
    F lo = (sqrt(l) - sqrt(m)) * (sqrt(l) - sqrt(m));
    F hi = (sqrt(l) + sqrt(m)) * (sqrt(l) + sqrt(m));
    std::complex<F> root = -upper_sqrt(x - lo) * upper_sqrt(x - hi);
    return (l + m - x - root) / (F(2) * l * m);
}

// Alternating case 1: B solves lambda mu (z-2lambda) B^2 + (2lambda-z)(2mu-z) B + z - 2mu = 0;
// radical z(z-2mu)(z-2lambda-2mu)/(z-2lambda) with the branch positive below 0.
template <typename F>
std::complex<F> alternating1_transform_t(F l, F m, F x) {
    if (rel_eq((double)l, (double)m)) return mm1_transform_t(l, m, x);  // reduces to constant
    std::complex<F> num = upper_sqrt(x) * upper_sqrt(x - F(2) * m) *
                          upper_sqrt(x - F(2) * l - F(2) * m);
    std::complex<F> root = -num / upper_sqrt(x - F(2) * l);
    return (F(2) * m - x - root) / (F(2) * l * m);
}

// Alternating case 2: quartic radical z(z-2min)(z-2max)(z-2lambda-2mu).
template <typename F>
std::complex<F> alternating2_transform_t(F l, F m, F x) {
    if (rel_eq((double)l, (double)m)) return mm1_transform_t(l, m, x);
    F e1 = F(2) * std::min(l, m), e2 = F(2) * std::max(l, m), e3 = F(2) * (l + m);
    std::complex<F> root =
        upper_sqrt(x) * upper_sqrt(x - e1) * upper_sqrt(x - e2) * upper_sqrt(x - e3);
    F num = x * x - F(2) * (l + m) * x + F(2) * m * (l + m);
    return (num - root) / (F(2) * m * m * (l + m - x));
}

// Defect A+ factor: one KMc continued-fraction step over the constant-rate tail.
template <typename F>
std::complex<F> defect_plus_transform_t(F l, F m, F l0, F m0, F x) {
    return F(1) / (l0 + m0 - x - l0 * m * mm1_transform_t(l, m, x));
}

template <typename F>
std::complex<F> halfline_transform_t(const CatalogModel& model, Side side, F x) {
    const Params& p = model.params();
    F l = (F)p.lambda, m = (F)p.mu;
    switch (model.family()) {
        case Family::MM1Absorbing:
            if (side == Side::Minus) throw OutOfDomain("mm1 has no A- factor");
            return mm1_transform_t(l, m, x);
        case Family::ConstantBilateral:
            // A- is the transposed queue; the transform is symmetric in (lambda, mu).
            return mm1_transform_t(l, m, x);
        case Family::SymmetricBilateral:
            return mm1_transform_t(l, m, x);
        case Family::AlternatingCase1:
            return side == Side::Plus ? alternating1_transform_t(l, m, x)
                                      : alternating1_transform_t(m, l, x);
        case Family::AlternatingCase2:
            return alternating2_transform_t(l, m, x);
        case Family::DefectCase1:
        case Family::DefectCase2:
            return side == Side::Plus
                       ? defect_plus_transform_t(l, m, (F)p.lambda0, (F)p.mu0, x)
                       : mm1_transform_t(l, m, x);
        case Family::SplitQueues:
            return side == Side::Plus ? mm1_transform_t(l, m, x)
                                      : mm1_transform_t((F)p.alpha, (F)p.beta, x);
    }
    throw OutOfDomain("unknown family");
}

cplx mm1_transform(double l, double m, double x) { return mm1_transform_t(l, m, x); }

}  // namespace

std::complex<double> halfline_transform_boundary(const CatalogModel& model, Side side, double x) {
    return halfline_transform_t<double>(model, side, x);
}

std::complex<long double> halfline_transform_boundary_ld(const CatalogModel& model, Side side,
                                                         double x) {
    return halfline_transform_t<long double>(model, side, (long double)x);
}

double SymMat2::min_eigenvalue() const {
    double h = 0.5 * (m11 + m22);
    return h - std::sqrt(sq(0.5 * (m11 - m22)) + sq(m12));
}

namespace {

double pieces_min(const std::vector<MatrixPiece>& pieces, const std::vector<MatrixAtom>& atoms) {
    double v = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces) v = std::min(v, p.a);
    for (const auto& a : atoms) v = std::min(v, a.location);
    return v;
}

}  // namespace

double SpectralMatrix::support_min() const { return pieces_min(pieces, atoms); }
double SpectralMatrix::support_max() const {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces) v = std::max(v, p.b);
    for (const auto& a : atoms) v = std::max(v, a.location);
    return v;
}

double SpectralMeasure::support_min() const {
    double v = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces) v = std::min(v, p.a);
    for (const auto& a : atoms) v = std::min(v, a.location);
    return v;
}
double SpectralMeasure::support_max() const {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces) v = std::max(v, p.b);
    for (const auto& a : atoms) v = std::max(v, a.location);
    return v;
}

namespace {

struct Interval {
    double a, b;
};

// Support intervals of the A+/A- measure for the family/side.
std::vector<Interval> halfline_support(const CatalogModel& model, Side side) {
    const Params& p = model.params();
    auto mm1_iv = [](double l, double m) {
        Endpoints e = sigma_pts(l, m);
        return std::vector<Interval>{{e.lo, e.hi}};
    };
    auto alt_iv = [](double l, double m) {
        if (rel_eq(l, m)) return std::vector<Interval>{{0.0, 4.0 * l}};
        return std::vector<Interval>{{0.0, 2.0 * std::min(l, m)},
                                     {2.0 * std::max(l, m), 2.0 * (l + m)}};
    };
    switch (model.family()) {
        case Family::MM1Absorbing:
            if (side == Side::Minus) throw OutOfDomain("mm1 has no A- factor");
            return mm1_iv(p.lambda, p.mu);
        case Family::ConstantBilateral:
        case Family::SymmetricBilateral:
            return mm1_iv(p.lambda, p.mu);
        case Family::AlternatingCase1:
        case Family::AlternatingCase2:
            return alt_iv(p.lambda, p.mu);  // the J intervals are symmetric in lambda, mu
        case Family::DefectCase1:
        case Family::DefectCase2:
            return mm1_iv(p.lambda, p.mu);
        case Family::SplitQueues:
            return side == Side::Plus ? mm1_iv(p.lambda, p.mu) : mm1_iv(p.alpha, p.beta);
    }
    throw OutOfDomain("unknown family");
}

// ---- endpoint classification by probing the density growth ----

template <typename F>
EndpointKind classify_endpoint(F&& trace, double a, double b, bool at_left) {
    double h = (b - a) * 1e-3;
    auto sample = [&](double d) { return trace(at_left ? a + d : b - d); };
    double v1 = sample(h / 4.0), v2 = sample(h / 16.0);
    if (!(v1 > 0.0) || !(v2 > 0.0)) return EndpointKind::Regular;
    double exponent = std::log(v1 / v2) / std::log(4.0);
    if (exponent > 0.25) return EndpointKind::SqrtVanishing;
    if (exponent < -0.25) return EndpointKind::InverseSqrt;
    return EndpointKind::Regular;
}

// ---- coupled boundary values -> bilateral density ----

SymMat2 bilateral_density_at(const CatalogModel& model, double x) {
    cplx bp = halfline_transform_boundary(model, Side::Plus, x);
    cplx bm = halfline_transform_boundary(model, Side::Minus, x);
    double lm1 = model.lambda_m1();
    double mu0 = model.mu_0();
    cplx den = 1.0 - lm1 * mu0 * bp * bm;
    cplx b11 = bp / den;
    cplx b22 = (lm1 / mu0) * bm / den;
    cplx b12 = lm1 * bp * bm / den;
    return {b11.imag() / M_PI, b12.imag() / M_PI, b22.imag() / M_PI};
}

// ---- split-queues support arrangement ----

std::vector<Interval> split_pieces(double sm, double sp, double tm, double tp,
                                   SplitArrangement arr) {
    std::vector<Interval> out;
    auto push = [&out](double a, double b) {
        if (b - a > 1e-14 * std::max(1.0, std::fabs(b))) out.push_back({a, b});
    };
    switch (arr) {
        case SplitArrangement::DisjointSigmaLow:
            push(sm, sp);
            push(tm, tp);
            break;
        case SplitArrangement::DisjointTauLow:
            push(tm, tp);
            push(sm, sp);
            break;
        case SplitArrangement::TauInsideSigma:
            push(sm, tm);
            push(tm, tp);
            push(tp, sp);
            break;
        case SplitArrangement::SigmaInsideTau:
            push(tm, sm);
            push(sm, sp);
            push(sp, tp);
            break;
        case SplitArrangement::OverlapSigmaLow:
            push(sm, tm);
            push(tm, sp);
            push(sp, tp);
            break;
        case SplitArrangement::OverlapTauLow:
            push(tm, sm);
            push(sm, tp);
            push(tp, sp);
            break;
    }
    return out;
}

SplitArrangement split_arrangement_impl(double sm, double sp, double tm, double tp) {
    const double scale = sp + tp;
    auto tie = [scale](double u, double v) { return std::fabs(u - v) <= kEqTol * scale; };
    if (tie(sm, tm) && tie(sp, tp)) {
        // full coincidence: {alpha,beta} = {lambda,mu}, the paper's alpha=lambda,
        // beta=mu reduction; containment with both side pieces empty
        return SplitArrangement::SigmaInsideTau;
    }
    if (tie(sm, tm)) {
        // Both inner endpoints at 0 happens for lambda=mu, alpha=beta (a figure
        // case); containment is then decided by the outer endpoints alone.
        if (sm <= kEqTol * scale && tm <= kEqTol * scale)
            return sp < tp ? SplitArrangement::SigmaInsideTau : SplitArrangement::TauInsideSigma;
        throw DegenerateParameters("split-queues: sigma and tau endpoints coincide");
    }
    if (tie(sp, tp) || tie(sp, tm) || tie(tp, sm))
        throw DegenerateParameters("split-queues: sigma and tau endpoints coincide");
    if (sp < tm) return SplitArrangement::DisjointSigmaLow;
    if (tp < sm) return SplitArrangement::DisjointTauLow;
    if (sm < tm && tp < sp) return SplitArrangement::TauInsideSigma;
    if (tm < sm && sp < tp) return SplitArrangement::SigmaInsideTau;
    if (sm < tm) return SplitArrangement::OverlapSigmaLow;
    return SplitArrangement::OverlapTauLow;
}

std::vector<Interval> bilateral_support(const CatalogModel& model) {
    const Params& p = model.params();
    switch (model.family()) {
        case Family::MM1Absorbing:
            throw OutOfDomain("spectral matrix needs a bilateral model");
        case Family::ConstantBilateral:
        case Family::SymmetricBilateral:
        case Family::DefectCase1:
        case Family::DefectCase2: {
            Endpoints e = sigma_pts(p.lambda, p.mu);
            return {{e.lo, e.hi}};
        }
        case Family::AlternatingCase1:
        case Family::AlternatingCase2: {
            if (rel_eq(p.lambda, p.mu)) return {{0.0, 4.0 * p.lambda}};
            return {{0.0, 2.0 * std::min(p.lambda, p.mu)},
                    {2.0 * std::max(p.lambda, p.mu), 2.0 * (p.lambda + p.mu)}};
        }
        case Family::SplitQueues: {
            Endpoints s = sigma_pts(p.lambda, p.mu);
            Endpoints t = sigma_pts(p.alpha, p.beta);
            SplitArrangement arr = split_arrangement_impl(s.lo, s.hi, t.lo, t.hi);
            return split_pieces(s.lo, s.hi, t.lo, t.hi, arr);
        }
    }
    throw OutOfDomain("unknown family");
}

// ---- atoms of the bilateral spectral matrix ----

// Branched sqrt((lambda+mu-z)^2 - 4 lambda mu): positive below the support,
// negative above (the analytic continuation used by the rational displays).
double sigma_radical_branch(double l, double m, double z) {
    Endpoints e = sigma_pts(l, m);
    double v = sq(l + m - z) - 4.0 * l * m;
    if (z <= e.lo) return std::sqrt(v);
    if (z >= e.hi) return -std::sqrt(v);
    throw ZInSupport("radical evaluated inside the spectral support");
}

struct RationalPQ {
    double p11, q11, p12, q12, p22, q22;
};

// Section 4 case 1 rational data (verified against the coupling relations).
RationalPQ defect1_pq(const Params& pr, double z) {
    double l = pr.lambda, m = pr.mu, l0 = pr.lambda0, m0 = pr.mu0;
    RationalPQ r;
    r.p11 = (l0 * m + m0 * l - 2.0 * l * m) * z + (l - m) * (l0 * m - m0 * l);
    r.q11 = -(l0 * m + l * m0);
    r.p12 = l * (z * z - (l0 + m0 + l + m) * z + (l - m) * (l0 - m0));
    r.q12 = -l * (l0 + m0 - z);
    r.p22 = (1.0 / m0) *
            ((l0 - l) * z * z * z +
             (-l0 * l0 - l0 * m0 - 2.0 * l0 * m + 2.0 * m0 * l + l * l + l * m) * z * z +
             m0 * (l - m) * (l0 * m - m0 * l) +
             (l0 * l0 * l + l0 * l0 * m - l0 * m0 * l + 2.0 * l0 * m0 * m - l0 * l * l +
              l0 * m * m - m0 * m0 * l - 2.0 * m0 * l * m) *
                 z);
    r.q22 = -(1.0 / m0) * ((l - l0) * z * z +
                           (l0 * l0 + l0 * m0 - l0 * l + l0 * m - 2.0 * m0 * l) * z +
                           m0 * (2.0 * l0 * l - l0 * m + m0 * l));
    return r;
}

double defect1_Dprime(const Params& pr, double z) {
    double l = pr.lambda, m = pr.mu, l0 = pr.lambda0, m0 = pr.mu0;
    double a = 2.0 * (l * m - l0 * m - m0 * l);
    double b = 2.0 * (l0 * l0 * m + l0 * m0 * l + l0 * m0 * m - l0 * l * m + l0 * m * m +
                      m0 * m0 * l + m0 * l * l - m0 * l * m);
    return 2.0 * a * z + b;
}

// Atom weight at a root g of D: exact residue of the rational transform,
// refactored into rank-1 form through the 11 and 12 entries (the 11 entry is
// positive whenever the atom exists).
MatrixAtom defect1_residue_atom(const Params& pr, double g) {
    RationalPQ r = defect1_pq(pr, g);
    double s = sigma_radical_branch(pr.lambda, pr.mu, g);
    double dp = defect1_Dprime(pr, g);
    double w11 = -(r.p11 + r.q11 * s) / dp;
    double w12 = -(r.p12 + r.q12 * s) / dp;
    double v1 = std::sqrt(w11);
    return MatrixAtom::make(g, 1.0, v1, w12 / v1);
}

std::vector<MatrixAtom> bilateral_atoms(const CatalogModel& model) {
    const Params& p = model.params();
    std::vector<MatrixAtom> atoms;
    switch (model.family()) {
        case Family::MM1Absorbing:
        case Family::ConstantBilateral:
        case Family::AlternatingCase1:
        case Family::AlternatingCase2:
            break;  // no jumps
        case Family::SymmetricBilateral: {
            double l = p.lambda, m = p.mu;
            if (m - l > kEqTol * (m + l)) {
                double w = (m - l) / (2.0 * m);
                atoms.push_back(MatrixAtom::make(0.0, w, 1.0, 1.0));
                atoms.push_back(MatrixAtom::make(2.0 * (l + m), w, 1.0, -1.0));
            }
            break;
        }
        case Family::DefectCase1: {
            double l = p.lambda, m = p.mu, l0 = p.lambda0, m0 = p.mu0;
            double s = l0 * m + m0 * l - l * m;
            double R = sq(l0 - m0 - l + m) + 4.0 * l0 * m0;
            double sr = std::sqrt(R);
            double base = (l0 * m + m0 * l) * (l0 + m0) + (l0 * m - m0 * l) * (m - l);
            double gp = (base + (l0 * m + m0 * l) * sr) / (2.0 * s);
            double gm = (base - (l0 * m + m0 * l) * sr) / (2.0 * s);
            double a11_plus =
                (l0 * m + m0 * l - 2.0 * l * m + (l0 * m + m0 * l) * (l + m - l0 - m0) / sr) /
                (2.0 * s);
            double a11_minus =
                (l0 * m + m0 * l - 2.0 * l * m - (l0 * m + m0 * l) * (l + m - l0 - m0) / sr) /
                (2.0 * s);
            // {A11^- > 0, gamma_+ > 0} puts the A^- matrix at gamma_+, and mirrored.
            if (a11_minus > kEqTol && gp > kEqTol) atoms.push_back(defect1_residue_atom(p, gp));
            if (a11_plus > kEqTol && gm > kEqTol) atoms.push_back(defect1_residue_atom(p, gm));
            break;
        }
        case Family::DefectCase2: {
            double l = p.lambda, m = p.mu, l0 = p.lambda0, m0 = p.mu0;
            double d = l0 + m0 - l;
            if (m - l > kEqTol * (m + l)) {
                double w = (m - l) / (l0 + m0 + m - l);
                atoms.push_back(MatrixAtom::make(0.0, w, 1.0, 1.0));
            }
            if (std::fabs(d) > std::sqrt(l * m) * (1.0 + kEqTol)) {
                double eta = (l0 + m0) * (l0 + m0 - l + m) / d;
                double c = (d * d - l * m) / (d * (l0 + m0 + m - l));
                if (eta > kEqTol) atoms.push_back(MatrixAtom::make(eta, c, 1.0, -m / d));
            }
            break;
        }
        case Family::SplitQueues: {
            double l = p.lambda, m = p.mu, a = p.alpha, b = p.beta;
            if (m - l > kEqTol * (m + l) && b - a > kEqTol * (b + a)) {
                double w = (b - a) * (m - l) / (m * (b - a + m - l));
                atoms.push_back(MatrixAtom::make(0.0, w, 1.0, 1.0));
            }
            double c1 = l * sq(a - m) - m * sq(b - l);
            double c2 = b * sq(a - m) - a * sq(b - l);
            bool set1 = a > m && b > l && c1 < 0.0 && c2 > 0.0;
            bool set2 = a < m && b > l && c1 < 0.0 && c2 > 0.0;
            bool set3 = a < m && b < l && c1 < 0.0 && c2 > 0.0;
            if (set1 || set2 || set3) {
                double zeta = (a - b + l - m) * (a * l - b * m) / ((l - b) * (a - m));
                double cz = -c1 * c2 / (m * (a - m) * (b - l) * (a - b + l - m));
                if (zeta > kEqTol)
                    atoms.push_back(
                        MatrixAtom::make(zeta, cz, 1.0 / (b - l), 1.0 / (a - m)));
            }
            break;
        }
    }
    return atoms;
}

}  // namespace

SplitArrangement split_arrangement(const CatalogModel& model) {
    if (model.family() != Family::SplitQueues)
        throw OutOfDomain("split_arrangement applies to split-queues models");
    const Params& p = model.params();
    Endpoints s = sigma_pts(p.lambda, p.mu);
    Endpoints t = sigma_pts(p.alpha, p.beta);
    return split_arrangement_impl(s.lo, s.hi, t.lo, t.hi);
}

std::string split_arrangement_name(SplitArrangement a) {
    switch (a) {
        case SplitArrangement::DisjointSigmaLow: return "disjoint-sigma-low";
        case SplitArrangement::DisjointTauLow: return "disjoint-tau-low";
        case SplitArrangement::TauInsideSigma: return "tau-inside-sigma";
        case SplitArrangement::SigmaInsideTau: return "sigma-inside-tau";
        case SplitArrangement::OverlapSigmaLow: return "overlap-sigma-low";
        case SplitArrangement::OverlapTauLow: return "overlap-tau-low";
    }
    return "?";
}

SpectralMatrix spectral_matrix(const CatalogModel& model) {
    if (model.state_space() != StateSpace::Bilateral)
        throw OutOfDomain("spectral matrix needs a bilateral model");
    SpectralMatrix out;
    out.lambda_m1 = model.lambda_m1();
    out.mu_0 = model.mu_0();
    out.pi_minus1 = model.potential_coefficient(-1);
    CatalogModel copy = model;
    for (const Interval& iv : bilateral_support(model)) {
        MatrixPiece piece;
        piece.a = iv.a;
        piece.b = iv.b;
        piece.density = [copy](double x) { return bilateral_density_at(copy, x); };
        auto trace = [&piece](double x) { return piece.density(x).trace(); };
        piece.left = classify_endpoint(trace, iv.a, iv.b, true);
        piece.right = classify_endpoint(trace, iv.a, iv.b, false);
        out.pieces.push_back(std::move(piece));
    }
    out.atoms = bilateral_atoms(model);
    return out;
}

namespace {

// d(z) = lambda0 + mu0 - z - lambda0 mu B(z): poles of the defect A+ transform are
// its real roots off the support; d is strictly decreasing on each real interval.
double defect_denominator(const Params& p, double z) {
    return p.lambda0 + p.mu0 - z -
           p.lambda0 * p.mu * mm1_transform(p.lambda, p.mu, z).real();
}

double defect_denominator_slope(const Params& p, double z) {
    Endpoints e = sigma_pts(p.lambda, p.mu);
    // branched root of (z-s-)(z-s+); root' follows from root^2 = (z-s-)(z-s+)
    double root = (z <= e.lo) ? std::sqrt((e.lo - z) * (e.hi - z))
                              : -std::sqrt((z - e.lo) * (z - e.hi));
    double root_slope = (2.0 * z - e.lo - e.hi) / (2.0 * root);
    double bprime = (-1.0 - root_slope) / (2.0 * p.lambda * p.mu);
    return -1.0 - p.lambda0 * p.mu * bprime;
}

double bisect_defect_root(const Params& p, double lo, double hi) {
    // d(lo) > 0 > d(hi)
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (defect_denominator(p, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<ScalarAtom> defect_halfline_atoms(const Params& p) {
    std::vector<ScalarAtom> atoms;
    Endpoints e = sigma_pts(p.lambda, p.mu);
    double span = p.lambda + p.mu + p.lambda0 + p.mu0;
    if (defect_denominator(p, e.lo) < 0.0) {
        double lo = std::min(0.0, e.lo) - span;
        while (defect_denominator(p, lo) < 0.0) lo -= span;
        double z0 = bisect_defect_root(p, lo, e.lo);
        atoms.push_back({std::max(z0, 0.0), -1.0 / defect_denominator_slope(p, z0)});
    }
    if (defect_denominator(p, e.hi) > 0.0) {
        double hi = e.hi + span;
        while (defect_denominator(p, hi) > 0.0) hi += span;
        double z0 = bisect_defect_root(p, e.hi, hi);
        atoms.push_back({z0, -1.0 / defect_denominator_slope(p, z0)});
    }
    return atoms;
}

}  // namespace

SpectralMeasure spectral_measure_halfline(const CatalogModel& model, Side side) {
    SpectralMeasure out;
    CatalogModel copy = model;
    for (const Interval& iv : halfline_support(model, side)) {
        ScalarPiece piece;
        piece.a = iv.a;
        piece.b = iv.b;
        piece.density = [copy, side](double x) {
            return halfline_transform_boundary(copy, side, x).imag() / M_PI;
        };
        auto trace = [&piece](double x) { return piece.density(x); };
        piece.left = classify_endpoint(trace, iv.a, iv.b, true);
        piece.right = classify_endpoint(trace, iv.a, iv.b, false);
        out.pieces.push_back(std::move(piece));
    }
    const Params& p = model.params();
    if (model.family() == Family::AlternatingCase2 && p.mu - p.lambda > kEqTol * (p.mu + p.lambda))
        out.atoms.push_back({p.lambda + p.mu, 1.0 - sq(p.lambda) / sq(p.mu)});
    if ((model.family() == Family::DefectCase1 || model.family() == Family::DefectCase2) &&
        side == Side::Plus)
        out.atoms = defect_halfline_atoms(p);
    return out;
}

namespace {

void check_below_support(double z, double smin) {
    if (!(z < smin - 1e-9)) throw ZInSupport("z must lie strictly below the spectral support");
}

}  // namespace

double stieltjes_halfline_closed(const CatalogModel& model, Side side, double z) {
    // atoms (defect poles, the alternating case-2 jump) are part of the
    // transform itself; the support minimum accounts for them.
    double smin = spectral_measure_halfline(model, side).support_min();
    check_below_support(z, smin);
    return halfline_transform_boundary(model, side, z).real();
}

double stieltjes_closed_scalar(const CatalogModel& model, double z) {
    if (model.family() != Family::MM1Absorbing)
        throw OutOfDomain("scalar Stieltjes transform is the half-line M/M/1 one");
    return stieltjes_halfline_closed(model, Side::Plus, z);
}

double stieltjes_closed(const CatalogModel& model, Component c, double z) {
    if (model.state_space() != StateSpace::Bilateral)
        throw OutOfDomain("component Stieltjes transforms need a bilateral model");
    check_below_support(z, spectral_matrix(model).support_min());
    double bp = halfline_transform_boundary(model, Side::Plus, z).real();
    double bm = halfline_transform_boundary(model, Side::Minus, z).real();
    double lm1 = model.lambda_m1(), mu0 = model.mu_0();
    double den = 1.0 - lm1 * mu0 * bp * bm;
    switch (c) {
        case Component::S11: return bp / den;
        case Component::S22: return (lm1 / mu0) * bm / den;
        case Component::S12: return lm1 * bp * bm / den;
    }
    throw OutOfDomain("unknown component");
}

double stieltjes_quadrature(const SpectralMatrix& s, Component c, double z,
                            const QuadratureConfig& cfg) {
    check_below_support(z, s.support_min());
    double acc = 0.0;
    for (const auto& piece : s.pieces)
        for (const CosineNode& n : cosine_nodes(piece.a, piece.b, cfg.nodes_per_piece))
            acc += n.weight * piece.density(n.x).component(c) / (n.x - z);
    for (const auto& atom : s.atoms) acc += atom.weight.component(c) / (atom.location - z);
    return acc;
}

double stieltjes_quadrature(const SpectralMeasure& s, double z, const QuadratureConfig& cfg) {
    check_below_support(z, s.support_min());
    double acc = 0.0;
    for (const auto& piece : s.pieces)
        for (const CosineNode& n : cosine_nodes(piece.a, piece.b, cfg.nodes_per_piece))
            acc += n.weight * piece.density(n.x) / (n.x - z);
    for (const auto& atom : s.atoms) acc += atom.weight / (atom.location - z);
    return acc;
}

double CouplingResiduals::max_abs() const {
    return std::max(std::fabs(r11), std::max(std::fabs(r22), std::fabs(r12)));
}

CouplingResiduals verify_coupling(const CatalogModel& model, double z,
                                  const QuadratureConfig& cfg) {
    SpectralMatrix s = spectral_matrix(model);
    double q11 = stieltjes_quadrature(s, Component::S11, z, cfg);
    double q22 = stieltjes_quadrature(s, Component::S22, z, cfg);
    double q12 = stieltjes_quadrature(s, Component::S12, z, cfg);
    double bp = stieltjes_halfline_closed(model, Side::Plus, z);
    double bm = stieltjes_halfline_closed(model, Side::Minus, z);
    double lm1 = model.lambda_m1(), mu0 = model.mu_0();
    double den = 1.0 - lm1 * mu0 * bp * bm;
    CouplingResiduals r;
    r.r11 = q11 - bp / den;
    r.r22 = q22 - (lm1 / mu0) * bm / den;
    r.r12 = q12 - lm1 * bp * bm / den;
    return r;
}

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* endpoint_name(EndpointKind k) {
    switch (k) {
        case EndpointKind::SqrtVanishing: return "sqrt-vanishing";
        case EndpointKind::InverseSqrt: return "inverse-sqrt";
        case EndpointKind::Regular: return "regular";
    }
    return "?";
}

std::vector<double> sample_grid(double a, double b, int n) {
    std::vector<double> xs(n);
    double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    for (int j = 0; j < n; ++j)
        xs[n - 1 - j] = mid + rad * std::cos(M_PI * (j + 0.5) / n);
    return xs;
}

void append_array(std::ostringstream& os, const char* key, const std::vector<double>& vals) {
    os << '"' << key << "\":[";
    for (size_t i = 0; i < vals.size(); ++i) {
        if (i) os << ',';
        os << fmt_num(vals[i]);
    }
    os << ']';
}

void append_params(std::ostringstream& os, const CatalogModel& model) {
    os << "\"parameters\":{";
    const Params& p = model.params();
    bool four = family_parameter_names(model.family()).size() == 4;
    os << "\"lambda\":" << fmt_num(p.lambda) << ",\"mu\":" << fmt_num(p.mu);
    if (model.family() == Family::SplitQueues)
        os << ",\"alpha\":" << fmt_num(p.alpha) << ",\"beta\":" << fmt_num(p.beta);
    else if (four)
        os << ",\"lambda0\":" << fmt_num(p.lambda0) << ",\"mu0\":" << fmt_num(p.mu0);
    os << '}';
}

}  // namespace

std::string spectral_to_json(const CatalogModel& model, int grid_points) {
    if (grid_points < 2) throw OutOfDomain("spectral grid needs at least 2 points");
    std::ostringstream os;
    os << "{\"family\":\"" << family_name(model.family()) << "\",";
    append_params(os, model);
    if (model.state_space() == StateSpace::Bilateral) {
        SpectralMatrix s = spectral_matrix(model);
        os << ",\"state_space\":\"bilateral\",\"pi_minus1\":" << fmt_num(s.pi_minus1)
           << ",\"pieces\":[";
        for (size_t i = 0; i < s.pieces.size(); ++i) {
            const auto& piece = s.pieces[i];
            if (i) os << ',';
            os << "{\"a\":" << fmt_num(piece.a) << ",\"b\":" << fmt_num(piece.b)
               << ",\"left\":\"" << endpoint_name(piece.left) << "\",\"right\":\""
               << endpoint_name(piece.right) << "\",";
            std::vector<double> xs = sample_grid(piece.a, piece.b, grid_points);
            std::vector<double> d11(xs.size()), d12(xs.size()), d22(xs.size());
            for (size_t j = 0; j < xs.size(); ++j) {
                SymMat2 d = piece.density(xs[j]);
                d11[j] = d.m11;
                d12[j] = d.m12;
                d22[j] = d.m22;
            }
            append_array(os, "x", xs);
            os << ',';
            append_array(os, "d11", d11);
            os << ',';
            append_array(os, "d12", d12);
            os << ',';
            append_array(os, "d22", d22);
            os << '}';
        }
        os << "],\"atoms\":[";
        for (size_t i = 0; i < s.atoms.size(); ++i) {
            const auto& a = s.atoms[i];
            if (i) os << ',';
            os << "{\"location\":" << fmt_num(a.location) << ",\"w11\":" << fmt_num(a.weight.m11)
               << ",\"w12\":" << fmt_num(a.weight.m12) << ",\"w22\":" << fmt_num(a.weight.m22)
               << '}';
        }
        os << "]}";
    } else {
        SpectralMeasure s = spectral_measure_halfline(model, Side::Plus);
        os << ",\"state_space\":\"half-line\",\"pieces\":[";
        for (size_t i = 0; i < s.pieces.size(); ++i) {
            const auto& piece = s.pieces[i];
            if (i) os << ',';
            os << "{\"a\":" << fmt_num(piece.a) << ",\"b\":" << fmt_num(piece.b)
               << ",\"left\":\"" << endpoint_name(piece.left) << "\",\"right\":\""
               << endpoint_name(piece.right) << "\",";
            std::vector<double> xs = sample_grid(piece.a, piece.b, grid_points);
            std::vector<double> d(xs.size());
            for (size_t j = 0; j < xs.size(); ++j) d[j] = piece.density(xs[j]);
            append_array(os, "x", xs);
            os << ',';
            append_array(os, "d", d);
            os << '}';
        }
        os << "],\"atoms\":[";
        for (size_t i = 0; i < s.atoms.size(); ++i) {
            if (i) os << ',';
            os << "{\"location\":" << fmt_num(s.atoms[i].location)
               << ",\"weight\":" << fmt_num(s.atoms[i].weight) << '}';
        }
        os << "]}";
    }
    return os.str();
}

}  // namespace bdspec
