#include <cmath>

#include "bdspec/model.hpp"
#include "catalog_helpers.hpp"
#include "doctest.h"

using namespace bdspec;
using bdspec::testing::catalog_grid;
using bdspec::testing::label;

TEST_CASE("construction: positivity and degeneracy policy") {
    CHECK_THROWS_AS(CatalogModel::mm1_absorbing(1.0, 0.0), NonPositiveParameter);
    CHECK_THROWS_AS(CatalogModel::mm1_absorbing(-1.0, 1.0), NonPositiveParameter);
    CHECK_THROWS_AS(CatalogModel::split_queues(1, 1, 1, 1), DegenerateParameters);
    // the redirect message names the simpler family
    try {
        CatalogModel::split_queues(1, 2, 2, 1);  // alpha=mu, beta=lambda
        CHECK(false);
    } catch (const DegenerateParameters& e) {
        CHECK(std::string(e.what()).find("constant-bilateral") != std::string::npos);
    }
    CHECK_THROWS_AS(CatalogModel::split_queues(1, 2, 3, 1), DegenerateParameters);     // beta=lambda
    CHECK_THROWS_AS(CatalogModel::split_queues(1, 2, 2, 3), DegenerateParameters);     // alpha=mu
    CHECK_THROWS_AS(CatalogModel::defect_case2(1, 2, 0.25, 0.75), DegenerateParameters);
    CHECK_THROWS_AS(CatalogModel::defect_case1(1, 2, 0.5, 1), DegenerateParameters);
    // paper's Fig. 6 parameter set is valid
    CHECK_NOTHROW(CatalogModel::defect_case2(1, 2, 1, 5));
    // alpha=lambda, beta=mu is a valid split model (rates match the symmetric family)
    CHECK_NOTHROW(CatalogModel::split_queues(1, 2, 1, 2));
}

TEST_CASE("rates: family definitions at spot states") {
    CHECK(CatalogModel::alternating_case1(1, 2).rates_at(3).birth == 2.0);
    CHECK(CatalogModel::alternating_case1(1, 2).rates_at(3).death == 2.0);
    CatalogModel sq = CatalogModel::split_queues(1, 2, 3, 4);
    CHECK(sq.rates_at(-1).birth == 4.0);  // lambda_{-n-1} = beta
    CHECK(sq.rates_at(-1).death == 3.0);  // mu_{-n-1} = alpha
    CHECK(CatalogModel::constant_bilateral(1, 1).rates_at(0).birth == 1.0);
    CHECK_THROWS_AS(CatalogModel::mm1_absorbing(1, 2).rates_at(-1), OutOfDomain);
}

TEST_CASE("potential coefficients: definition values") {
    CHECK(CatalogModel::symmetric_bilateral(1, 2).potential_coefficient(-2) ==
          doctest::Approx(0.5).epsilon(1e-15));
    for (const CatalogModel& m : catalog_grid())
        CHECK(m.potential_coefficient(0) == 1.0);
    CHECK(CatalogModel::split_queues(1, 2, 3, 4).potential_coefficient(-1) ==
          doctest::Approx(0.5).epsilon(1e-15));  // mu/beta
}

TEST_CASE("detailed balance pi_n mu_n = lambda_{n-1} pi_{n-1} for |n| <= 20") {
    for (const CatalogModel& m : catalog_grid()) {
        INFO(label(m));
        long lo = m.state_space() == StateSpace::HalfLine ? 1 : -20;
        for (long n = lo; n <= 20; ++n) {
            double lhs = m.potential_coefficient(n) * m.rates_at(n).death;
            double rhs = m.rates_at(n - 1).birth * m.potential_coefficient(n - 1);
            CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::fabs(rhs));
        }
    }
}

TEST_CASE("defect families with lambda0=lambda, mu0=mu reduce to the constant families") {
    CatalogModel d1 = CatalogModel::defect_case1(1, 2, 1, 2);
    CatalogModel cb = CatalogModel::constant_bilateral(1, 2);
    CatalogModel d2 = CatalogModel::defect_case2(1, 2, 1, 2);
    CatalogModel sb = CatalogModel::symmetric_bilateral(1, 2);
    for (long n = -25; n <= 25; ++n) {
        CHECK(d1.rates_at(n).birth == cb.rates_at(n).birth);
        CHECK(d1.rates_at(n).death == cb.rates_at(n).death);
        CHECK(d2.rates_at(n).birth == sb.rates_at(n).birth);
        CHECK(d2.rates_at(n).death == sb.rates_at(n).death);
    }
}

TEST_CASE("split queues with alpha=lambda, beta=mu matches the symmetric family") {
    CatalogModel sq = CatalogModel::split_queues(1, 2, 1, 2);
    CatalogModel sb = CatalogModel::symmetric_bilateral(1, 2);
    for (long n = -25; n <= 25; ++n) {
        CHECK(sq.rates_at(n).birth == sb.rates_at(n).birth);
        CHECK(sq.rates_at(n).death == sb.rates_at(n).death);
    }
}

TEST_CASE("half-line factors: A- births run away from the origin") {
    CatalogModel sq = CatalogModel::split_queues(1, 2, 3, 4);
    // A- state k corresponds to original state -(k+1)
    CHECK(sq.half_line_rates(Side::Minus, 0).birth == 3.0);  // mu_{-1} = alpha
    CHECK(sq.half_line_rates(Side::Minus, 0).death == 4.0);  // lambda_{-1} = beta
    CHECK(sq.half_line_rates(Side::Plus, 5).birth == 1.0);
    CHECK_THROWS_AS(CatalogModel::mm1_absorbing(1, 2).half_line_rates(Side::Minus, 0),
                    OutOfDomain);
}

TEST_CASE("coupling constants lambda_{-1}, mu_0 per family") {
    CHECK(CatalogModel::constant_bilateral(1, 2).lambda_m1() == 1.0);
    CHECK(CatalogModel::constant_bilateral(1, 2).mu_0() == 2.0);
    CHECK(CatalogModel::symmetric_bilateral(1, 2).lambda_m1() == 2.0);
    CHECK(CatalogModel::alternating_case1(1, 2).lambda_m1() == 2.0);  // odd state
    CHECK(CatalogModel::alternating_case1(1, 2).mu_0() == 1.0);       // even state
    CHECK(CatalogModel::alternating_case2(1, 2).lambda_m1() == 2.0);
    CHECK(CatalogModel::alternating_case2(1, 2).mu_0() == 2.0);
    CHECK(CatalogModel::defect_case1(1, 2, 1, 5).mu_0() == 5.0);
    CHECK(CatalogModel::split_queues(1, 2, 3, 4).lambda_m1() == 4.0);
}

TEST_CASE("family names round-trip") {
    for (Family f : all_families()) CHECK(family_from_name(family_name(f)) == f);
    CHECK_THROWS_AS(family_from_name("no-such-family"), OutOfDomain);
    CHECK(all_families().size() == 8);
}
