#include <cmath>

#include "bdspec/km.hpp"
#include "bdspec/oracle.hpp"
#include "bdspec/special_functions.hpp"
#include "catalog_helpers.hpp"
#include "doctest.h"

using namespace bdspec;
using bdspec::testing::bilateral_grid;
using bdspec::testing::catalog_grid;
using bdspec::testing::label;

TEST_CASE("P(0) is the identity: orthogonality of the whole construction") {
    for (const CatalogModel& m : catalog_grid()) {
        INFO(label(m));
        bool halfline = m.state_space() == StateSpace::HalfLine;
        long lo = halfline ? 0 : -8;
        for (long i = lo; i <= 8; ++i) {
            auto row = transition_row(m, i, 0.0, lo, 8);
            for (long j = lo; j <= 8; ++j) {
                INFO("i=", i, " j=", j);
                CHECK(std::fabs(row[j - lo].value - (i == j ? 1.0 : 0.0)) <= 1e-7);
            }
        }
    }
}

TEST_CASE("spot value e^{-2} I_0(2) for the constant model") {
    CatalogModel cb = CatalogModel::constant_bilateral(1, 1);
    TransitionResult r = transition_probability(cb, 0, 0, 1.0);
    CHECK(r.value == doctest::Approx(0.30850832255367104).epsilon(1e-9));
    CHECK(r.method == TransitionMethod::Quadrature);
    CHECK(r.err_estimate <= 1e-9);
}

TEST_CASE("closed forms: values and elementary cases") {
    CatalogModel mm1 = CatalogModel::mm1_absorbing(1, 2);
    CHECK(closed_form_transition(mm1, 0, 0, 0.0).value == doctest::Approx(1.0).epsilon(1e-14));
    CatalogModel cb = CatalogModel::constant_bilateral(1, 1);
    CHECK(closed_form_transition(cb, 2, 5, 1.0).value ==
          doctest::Approx(bessel_i_scaled(3, 2.0)).epsilon(1e-13));
    CatalogModel mm11 = CatalogModel::mm1_absorbing(1, 1);
    double expected = bessel_i_scaled(1, 4.0) - bessel_i_scaled(3, 4.0);  // e^{-4}(I_1 - I_3)
    CHECK(closed_form_transition(mm11, 0, 1, 2.0).value ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(closed_form_transition(CatalogModel::symmetric_bilateral(1, 2), 0, 0, 1.0),
                    NoClosedForm);
}

TEST_CASE("quadrature vs Bessel closed forms to 1e-8") {
    for (double t : {0.5, 1.0, 3.0, 9.0}) {
        CatalogModel cb = CatalogModel::constant_bilateral(1, 1);
        CatalogModel cb2 = CatalogModel::constant_bilateral(1, 2);
        for (long i = -6; i <= 6; i += 3)
            for (long j = -6; j <= 6; j += 2) {
                CHECK(std::fabs(transition_probability(cb, i, j, t).value -
                                closed_form_transition(cb, i, j, t).value) <= 1e-8);
                CHECK(std::fabs(transition_probability(cb2, i, j, t).value -
                                closed_form_transition(cb2, i, j, t).value) <= 1e-8);
            }
        CatalogModel mm1 = CatalogModel::mm1_absorbing(1, 2);
        for (long i = 0; i <= 6; i += 2)
            for (long j = 0; j <= 6; ++j)
                CHECK(std::fabs(transition_probability(mm1, i, j, t).value -
                                closed_form_transition(mm1, i, j, t).value) <= 1e-8);
    }
}

TEST_CASE("quadrature vs oracle across the catalog") {
    for (const CatalogModel& m : catalog_grid()) {
        INFO(label(m));
        bool halfline = m.state_space() == StateSpace::HalfLine;
        long lo = halfline ? 0 : -3;
        for (double t : {0.5, 3.0})
            for (long i = lo; i <= 3; i += 3) {
                auto km = transition_row(m, i, t, lo, 3);
                auto ora = oracle_row(m, i, t, lo, 3, 1e-9);
                for (size_t k = 0; k < km.size(); ++k) {
                    INFO("t=", t, " i=", i, " k=", k);
                    CHECK(std::fabs(km[k].value - ora[k].value) <= 1e-6);
                }
            }
    }
}

TEST_CASE("row sums: conservative bilateral row reaches 1, absorbing stays below") {
    CatalogModel cb = CatalogModel::constant_bilateral(1, 1);
    auto row = transition_row(cb, 0, 1.0, -8, 8);
    double sum = 0.0;
    for (const auto& r : row) sum += r.value;
    CHECK(std::fabs(sum - 1.0) <= 1e-6);

    CatalogModel mm1 = CatalogModel::mm1_absorbing(1, 2);
    auto row2 = transition_row(mm1, 0, 3.0, 0, 30);
    double sum2 = 0.0;
    for (const auto& r : row2) sum2 += r.value;
    CHECK(sum2 < 1.0);
    CHECK(sum2 >= 0.0);

    // t=0 gives the standard basis vector
    auto row3 = transition_row(cb, 2, 0.0, -4, 4);
    for (long n = -4; n <= 4; ++n)
        CHECK(std::fabs(row3[n + 4].value - (n == 2 ? 1.0 : 0.0)) <= 1e-9);
}

TEST_CASE("positivity within tolerance") {
    for (const CatalogModel& m : catalog_grid()) {
        INFO(label(m));
        bool halfline = m.state_space() == StateSpace::HalfLine;
        long lo = halfline ? 0 : -5;
        for (double t : {0.5, 3.0}) {
            auto row = transition_row(m, 0, t, lo, 5);
            for (const auto& r : row) {
                CHECK(r.value >= -1e-8);
                CHECK(r.value <= 1.0 + 1e-8);
            }
        }
    }
}

TEST_CASE("Chapman-Kolmogorov with a windowed middle sum") {
    for (const CatalogModel& m : bilateral_grid()) {
        INFO(label(m));
        double s = 0.5, t = 1.0;
        double rate = 0.0;
        for (long n = -2; n <= 2; ++n)
            rate = std::max(rate, m.rates_at(n).birth + m.rates_at(n).death);
        long w = (long)std::ceil(4.0 * rate * (s + t) + 20.0) / 2;
        double composed = 0.0;
        for (long k = -w; k <= w; ++k) {
            // Entries many jumps out sit below the quadrature noise floor when
            // the supports are disjoint (the two pieces cancel to ~1e-10 of
            // their size); the evaluator refuses them, and their true values
            // (Poisson-tail sized, < 1e-9) cannot move a 1e-5 comparison.
            try {
                composed += transition_probability(m, 0, k, s).value *
                            transition_probability(m, k, 1, t).value;
            } catch (const NonConvergedQuadrature&) {
                CHECK(std::labs(k) > 10);
            }
        }
        double direct = transition_probability(m, 0, 1, s + t).value;
        CHECK(std::fabs(composed - direct) <= 1e-5);
    }
}

TEST_CASE("ergodic limit: atom at zero dominates at t=200") {
    CatalogModel sb = CatalogModel::symmetric_bilateral(1, 2);
    // invariant entry pi-bar_1 = (1/4)(1/2) = 1/8
    CHECK(transition_probability(sb, 0, 1, 200.0).value ==
          doctest::Approx(0.125).epsilon(1e-5));
}

TEST_CASE("probability current: t=0 structure and the two routes") {
    for (const CatalogModel& m : bilateral_grid()) {
        INFO(label(m));
        // Omega_{j,n}(0) = lambda_{n-1} delta_{j,n-1} - mu_n delta_{j,n}
        CHECK(probability_current(m, 1, 2, 0.0, CurrentMethod::Direct) ==
              doctest::Approx(m.rates_at(1).birth).epsilon(1e-7));
        CHECK(probability_current(m, 2, 2, 0.0, CurrentMethod::Direct) ==
              doctest::Approx(-m.rates_at(2).death).epsilon(1e-7));
        CHECK(std::fabs(probability_current(m, 0, 3, 0.0, CurrentMethod::Direct)) <= 1e-7);
        for (double t : {0.5, 3.0})
            for (long n : {-2L, 0L, 1L, 3L}) {
                double direct = probability_current(m, 0, n, t, CurrentMethod::Direct);
                double dual = probability_current(m, 0, n, t, CurrentMethod::Dual);
                INFO("t=", t, " n=", n);
                CHECK(std::fabs(direct - dual) <= 1e-8);
            }
    }
    // half-line current agreement too
    CatalogModel mm1 = CatalogModel::mm1_absorbing(1, 2);
    for (long n : {0L, 1L, 4L}) {
        double direct = probability_current(mm1, 0, n, 3.0, CurrentMethod::Direct);
        double dual = probability_current(mm1, 0, n, 3.0, CurrentMethod::Dual);
        CHECK(std::fabs(direct - dual) <= 1e-8);
    }
}

TEST_CASE("constant-model current matches the displayed Bessel form") {
    double l = 1.0, mu = 2.0;
    CatalogModel cb = CatalogModel::constant_bilateral(l, mu);
    for (long n : {-1L, 0L, 2L})
        for (double t : {0.5, 2.0}) {
            double z = 2.0 * std::sqrt(l * mu) * t;
            double gap = t * (l + mu - 2.0 * std::sqrt(l * mu));
            double ratio = std::sqrt(l / mu);
            long k = n;  // j = 0
            double expected = mu * std::pow(ratio, double(k)) *
                              (ratio * bessel_i_scaled(std::labs(k - 1), z) -
                               bessel_i_scaled(std::labs(k), z)) *
                              std::exp(-gap);
            CHECK(probability_current(cb, 0, n, t, CurrentMethod::Direct) ==
                  doctest::Approx(expected).epsilon(1e-8));
        }
}

TEST_CASE("current signs from the figure discussions") {
    // Fig 1: absorbing queue, first-state current is negative
    CatalogModel mm1 = CatalogModel::mm1_absorbing(1, 2);
    CHECK(probability_current(mm1, 0, 1, 3.0, CurrentMethod::Direct) < 0.0);
    // Fig 2(a), lambda < mu: mass released at 0 spreads outward (current away
    // from the origin on both sides), and the reflecting boundaries mean the
    // currents relax to zero instead of persisting; contrast Fig 2(b).
    CatalogModel sb = CatalogModel::symmetric_bilateral(1, 2);
    for (double t : {3.0, 6.0, 9.0}) {
        for (long n = -5; n <= 0; ++n)
            CHECK(probability_current(sb, 0, n, t, CurrentMethod::Dual) <= 1e-8);
        for (long n = 1; n <= 5; ++n)
            CHECK(probability_current(sb, 0, n, t, CurrentMethod::Dual) >= -1e-8);
    }
    for (long n : {-3L, 0L, 2L}) {
        double early = std::fabs(probability_current(sb, 0, n, 3.0, CurrentMethod::Direct));
        double late = std::fabs(probability_current(sb, 0, n, 9.0, CurrentMethod::Direct));
        CHECK(late < early);
    }
}

TEST_CASE("integrate_piece: masses and the first-moment identity") {
    CatalogModel mm1 = CatalogModel::mm1_absorbing(1, 1);
    SpectralMeasure s = spectral_measure_halfline(mm1, Side::Plus);
    auto one = [](double) { return 1.0; };
    CHECK(integrate_piece(s.pieces[0], one) == doctest::Approx(1.0).epsilon(1e-10));
    // first moment equals lambda_0 + mu_0
    auto ident = [](double x) { return x; };
    CHECK(integrate_piece(s.pieces[0], ident) == doctest::Approx(2.0).epsilon(1e-8));
    // two-piece half-line mass for the alternating family
    CatalogModel a1 = CatalogModel::alternating_case1(1, 2);
    SpectralMeasure sa = spectral_measure_halfline(a1, Side::Plus);
    double mass = 0.0;
    for (const auto& piece : sa.pieces) mass += integrate_piece(piece, one);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("row and single-entry evaluations agree exactly") {
    CatalogModel sq = CatalogModel::split_queues(1, 2, 3, 4);
    auto row = transition_row(sq, 0, 1.0, -3, 3);
    for (long j = -3; j <= 3; ++j)
        CHECK(row[j + 3].value == transition_probability(sq, 0, j, 1.0).value);
}
