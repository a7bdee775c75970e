#include "bdspec/model.hpp"

#include <cmath>
#include <sstream>

namespace bdspec {

namespace {

constexpr double kEqTol = 1e-12;  // relative; user parameters are exact-intent literals

bool rel_eq(double a, double b) {
    return std::fabs(a - b) <= kEqTol * std::max(std::fabs(a), std::fabs(b));
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be a positive real (got " << v << ")";
        throw NonPositiveParameter(os.str());
    }
}

bool even(long n) { return (n % 2) == 0; }

}  // namespace

CatalogModel CatalogModel::mm1_absorbing(double lambda, double mu) {
    require_positive(lambda, "lambda");
    require_positive(mu, "mu");
    Params p;
    p.lambda = lambda;
    p.mu = mu;
    return CatalogModel(Family::MM1Absorbing, p);
}

CatalogModel CatalogModel::constant_bilateral(double lambda, double mu) {
    require_positive(lambda, "lambda");
    require_positive(mu, "mu");
    Params p;
    p.lambda = lambda;
    p.mu = mu;
    return CatalogModel(Family::ConstantBilateral, p);
}

CatalogModel CatalogModel::symmetric_bilateral(double lambda, double mu) {
    require_positive(lambda, "lambda");
    require_positive(mu, "mu");
    Params p;
    p.lambda = lambda;
    p.mu = mu;
    return CatalogModel(Family::SymmetricBilateral, p);
}

CatalogModel CatalogModel::alternating_case1(double lambda, double mu) {
    require_positive(lambda, "lambda");
    require_positive(mu, "mu");
    Params p;
    p.lambda = lambda;
    p.mu = mu;
    return CatalogModel(Family::AlternatingCase1, p);
}

CatalogModel CatalogModel::alternating_case2(double lambda, double mu) {
    require_positive(lambda, "lambda");
    require_positive(mu, "mu");
    Params p;
    p.lambda = lambda;
    p.mu = mu;
    return CatalogModel(Family::AlternatingCase2, p);
}

CatalogModel CatalogModel::defect_case1(double lambda, double mu, double lambda0, double mu0) {
    require_positive(lambda, "lambda");
    require_positive(mu, "mu");
    require_positive(lambda0, "lambda0");
    require_positive(mu0, "mu0");
    // The pole denominator 2(lambda0*mu + mu0*lambda - lambda*mu) of gamma_+-
    // must not vanish.
    if (rel_eq(lambda0 * mu + mu0 * lambda, lambda * mu)) {
        throw DegenerateParameters(
            "defect-case1: lambda0*mu + mu0*lambda - lambda*mu vanishes; the pole "
            "locations gamma_+- are undefined for these parameters");
    }
    Params p;
    p.lambda = lambda;
    p.mu = mu;
    p.lambda0 = lambda0;
    p.mu0 = mu0;
    return CatalogModel(Family::DefectCase1, p);
}

CatalogModel CatalogModel::defect_case2(double lambda, double mu, double lambda0, double mu0) {
    require_positive(lambda, "lambda");
    require_positive(mu, "mu");
    require_positive(lambda0, "lambda0");
    require_positive(mu0, "mu0");
    if (rel_eq(lambda0 + mu0, lambda)) {
        throw DegenerateParameters(
            "defect-case2: lambda0 + mu0 - lambda vanishes; the pole location eta "
            "is undefined for these parameters");
    }
    Params p;
    p.lambda = lambda;
    p.mu = mu;
    p.lambda0 = lambda0;
    p.mu0 = mu0;
    return CatalogModel(Family::DefectCase2, p);
}

CatalogModel CatalogModel::split_queues(double lambda, double mu, double alpha, double beta) {
    require_positive(lambda, "lambda");
    require_positive(mu, "mu");
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    if (rel_eq(alpha, mu) && rel_eq(beta, lambda)) {
        throw DegenerateParameters(
            "split-queues with alpha=mu, beta=lambda reduces to constant-bilateral; "
            "use that family");
    }
    // Denominator (lambda-beta)(alpha-mu) of the pole location zeta.
    if (rel_eq(lambda, beta) || rel_eq(alpha, mu)) {
        throw DegenerateParameters(
            "split-queues: (lambda-beta)*(alpha-mu) vanishes; the pole location zeta "
            "is undefined for these parameters");
    }
    Params p;
    p.lambda = lambda;
    p.mu = mu;
    p.alpha = alpha;
    p.beta = beta;
    return CatalogModel(Family::SplitQueues, p);
}

CatalogModel CatalogModel::make(Family family, const Params& p) {
    switch (family) {
        case Family::MM1Absorbing:
            return mm1_absorbing(p.lambda, p.mu);
        case Family::ConstantBilateral:
            return constant_bilateral(p.lambda, p.mu);
        case Family::SymmetricBilateral:
            return symmetric_bilateral(p.lambda, p.mu);
        case Family::AlternatingCase1:
            return alternating_case1(p.lambda, p.mu);
        case Family::AlternatingCase2:
            return alternating_case2(p.lambda, p.mu);
        case Family::DefectCase1:
            return defect_case1(p.lambda, p.mu, p.lambda0, p.mu0);
        case Family::DefectCase2:
            return defect_case2(p.lambda, p.mu, p.lambda0, p.mu0);
        case Family::SplitQueues:
            return split_queues(p.lambda, p.mu, p.alpha, p.beta);
    }
    throw OutOfDomain("unknown family");
}

Rate CatalogModel::rates_at(long n) const {
    const Params& p = params_;
    switch (family_) {
        case Family::MM1Absorbing:
            if (n < 0) throw OutOfDomain("mm1: state index must be >= 0");
            return {p.lambda, p.mu};
        case Family::ConstantBilateral:
            return {p.lambda, p.mu};
        case Family::SymmetricBilateral:
            return n >= 0 ? Rate{p.lambda, p.mu} : Rate{p.mu, p.lambda};
        case Family::AlternatingCase1:
            // lambda_{2n}=lambda, lambda_{2n+1}=mu, mu_{2n}=lambda, mu_{2n+1}=mu
            return even(n) ? Rate{p.lambda, p.lambda} : Rate{p.mu, p.mu};
        case Family::AlternatingCase2:
            // lambda_{2n}=lambda, lambda_{2n+1}=mu, mu_{2n}=mu, mu_{2n+1}=lambda
            return even(n) ? Rate{p.lambda, p.mu} : Rate{p.mu, p.lambda};
        case Family::DefectCase1:
            if (n == 0) return {p.lambda0, p.mu0};
            return {p.lambda, p.mu};
        case Family::DefectCase2:
            if (n == 0) return {p.lambda0, p.mu0};
            return n > 0 ? Rate{p.lambda, p.mu} : Rate{p.mu, p.lambda};
        case Family::SplitQueues:
            return n >= 0 ? Rate{p.lambda, p.mu} : Rate{p.beta, p.alpha};
    }
    throw OutOfDomain("unknown family");
}

double CatalogModel::potential_coefficient(long n) const {
    if (state_space() == StateSpace::HalfLine && n < 0)
        throw OutOfDomain("potential coefficient: state index must be >= 0");
    double pi = 1.0;
    if (n >= 0) {
        for (long k = 1; k <= n; ++k) pi *= rates_at(k - 1).birth / rates_at(k).death;
    } else {
        for (long k = -1; k >= n; --k) pi *= rates_at(k + 1).death / rates_at(k).birth;
    }
    return pi;
}

Rate CatalogModel::half_line_rates(Side side, long k) const {
    if (k < 0) throw OutOfDomain("half-line factor: state index must be >= 0");
    if (side == Side::Plus) return rates_at(k);
    if (state_space() == StateSpace::HalfLine)
        throw OutOfDomain("half-line model has no A- factor");
    Rate r = rates_at(-k - 1);
    return {r.death, r.birth};
}

std::string family_name(Family f) {
    switch (f) {
        case Family::MM1Absorbing: return "mm1";
        case Family::ConstantBilateral: return "constant-bilateral";
        case Family::SymmetricBilateral: return "symmetric-bilateral";
        case Family::AlternatingCase1: return "alternating-case1";
        case Family::AlternatingCase2: return "alternating-case2";
        case Family::DefectCase1: return "defect-case1";
        case Family::DefectCase2: return "defect-case2";
        case Family::SplitQueues: return "split-queues";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    for (Family f : all_families())
        if (family_name(f) == name) return f;
    throw OutOfDomain("unknown family name: " + name);
}

std::vector<std::string> family_parameter_names(Family f) {
    switch (f) {
        case Family::DefectCase1:
        case Family::DefectCase2:
            return {"lambda", "mu", "lambda0", "mu0"};
        case Family::SplitQueues:
            return {"lambda", "mu", "alpha", "beta"};
        default:
            return {"lambda", "mu"};
    }
}

std::vector<Params> family_default_parameter_sets(Family f) {
    auto lm = [](double l, double m) {
        Params p;
        p.lambda = l;
        p.mu = m;
        return p;
    };
    auto lm4 = [](double l, double m, double a, double b) {
        Params p;
        p.lambda = l;
        p.mu = m;
        p.lambda0 = a;
        p.mu0 = b;
        return p;
    };
    auto sq = [](double l, double m, double a, double b) {
        Params p;
        p.lambda = l;
        p.mu = m;
        p.alpha = a;
        p.beta = b;
        return p;
    };
    switch (f) {
        case Family::MM1Absorbing:
            return {lm(1, 1), lm(1, 2), lm(2, 1), lm(2, 2)};
        case Family::ConstantBilateral:
            return {lm(1, 1), lm(1, 2), lm(2, 1)};
        case Family::SymmetricBilateral:
            return {lm(1, 2), lm(2, 1)};
        case Family::AlternatingCase1:
            return {lm(1, 2), lm(2, 1)};
        case Family::AlternatingCase2:
            return {lm(1, 2), lm(2, 1)};
        case Family::DefectCase1:
            return {lm4(1, 2, 1, 5), lm4(1, 2, 5, 1), lm4(2, 1, 1, 5), lm4(2, 1, 5, 1)};
        case Family::DefectCase2:
            return {lm4(1, 2, 1, 5), lm4(2, 1, 5, 1)};
        case Family::SplitQueues:
            return {sq(1, 2, 3, 4), sq(0.5, 1.0 / 3.0, 2.6, 0.1), sq(1, 2.5, 1, 2),
                    sq(1, 1, 2, 2)};
    }
    return {};
}

std::vector<Family> all_families() {
    return {Family::MM1Absorbing,     Family::ConstantBilateral, Family::SymmetricBilateral,
            Family::AlternatingCase1, Family::AlternatingCase2,  Family::DefectCase1,
            Family::DefectCase2,      Family::SplitQueues};
}

}  // namespace bdspec
