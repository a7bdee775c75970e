#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bdspec/errors.hpp"

namespace bdspec {

/// The seven catalog families (plus the half-line absorbing queue they build on).
enum class Family {
    MM1Absorbing,        // absorbing M/M/1 queue on the nonnegative integers
    ConstantBilateral,   // constant rates on all integers
    SymmetricBilateral,  // constant rates, mirror-symmetric about 0
    AlternatingCase1,    // rates constant from even states / from odd states
    AlternatingCase2,    // alternating with opposite parity for births and deaths
    DefectCase1,         // constant bilateral with one defect at state 0
    DefectCase2,         // symmetric bilateral with one defect at state 0
    SplitQueues,         // two different M/M/1 queues glued at the origin
};

enum class StateSpace { HalfLine, Bilateral };

/// Which half-line factor of a bilateral process: A+ acts on states 0,1,2,...;
/// A- acts on states -1,-2,... reindexed as 0,1,2,...
enum class Side { Plus, Minus };

/// Birth/death rate pair (lambda_n, mu_n), both in 1/time.
struct Rate {
    double birth = 0.0;
    double death = 0.0;
};

/// Raw family parameters. Unused slots stay NaN.
struct Params {
    double lambda = NAN;
    double mu = NAN;
    double alpha = NAN;
    double beta = NAN;
    double lambda0 = NAN;
    double mu0 = NAN;
};

/// A validated catalog model: family tag plus parameters, with the rate rule
/// evaluated on demand (the state space is unbounded, the rule is finite).
/// Immutable after construction; all member functions are pure.
class CatalogModel {
  public:
    static CatalogModel mm1_absorbing(double lambda, double mu);
    static CatalogModel constant_bilateral(double lambda, double mu);
    static CatalogModel symmetric_bilateral(double lambda, double mu);
    static CatalogModel alternating_case1(double lambda, double mu);
    static CatalogModel alternating_case2(double lambda, double mu);
    static CatalogModel defect_case1(double lambda, double mu, double lambda0, double mu0);
    static CatalogModel defect_case2(double lambda, double mu, double lambda0, double mu0);
    static CatalogModel split_queues(double lambda, double mu, double alpha, double beta);

    /// Generic factory used by the CLI; validates exactly like the named ones.
    static CatalogModel make(Family family, const Params& p);

    Family family() const { return family_; }
    StateSpace state_space() const {
        return family_ == Family::MM1Absorbing ? StateSpace::HalfLine : StateSpace::Bilateral;
    }
    const Params& params() const { return params_; }

    /// (lambda_n, mu_n) for state n. Throws OutOfDomain for n<0 on the half line.
    Rate rates_at(long n) const;

    /// Potential coefficient pi_n (pi_0 = 1), computed iteratively from 0 outward.
    double potential_coefficient(long n) const;

    /// Rates of the half-line factor A+ or A-, state k >= 0. For A- the k-th
    /// state is the original state -(k+1): births run away from the origin.
    Rate half_line_rates(Side side, long k) const;

    /// lambda_{-1} and mu_0, the constants entering the coupling relations.
    double lambda_m1() const { return rates_at(-1).birth; }
    double mu_0() const { return rates_at(0).death; }

  private:
    CatalogModel(Family f, Params p) : family_(f), params_(p) {}
    Family family_;
    Params params_;
};

/// CLI-facing name, e.g. "split-queues".
std::string family_name(Family f);
/// Inverse of family_name; throws OutOfDomain on unknown names.
Family family_from_name(const std::string& name);
/// Parameter names in CLI order for the family.
std::vector<std::string> family_parameter_names(Family f);
/// Figure-caption (or documented default) parameter sets for the family.
std::vector<Params> family_default_parameter_sets(Family f);
/// All families in catalog order.
std::vector<Family> all_families();

}  // namespace bdspec
