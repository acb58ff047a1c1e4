#include <doctest.h>

#include <stdexcept>

#include "missnet/marlab.hpp"
#include "missnet/rng.hpp"

using namespace missnet;

TEST_CASE("constant components give constant g00 = 0.75") {
    PairMechanism mech = build_mar_pair({0.1, 0.1}, {0.1, 0.1}, 0.05);
    for (int x_ij = 0; x_ij < 2; ++x_ij)
        for (int x_ik = 0; x_ik < 2; ++x_ik)
            CHECK(mech.prob(x_ij, x_ik, 0, 0) == doctest::Approx(0.75));
}

TEST_CASE("g10 rising in x_ik moves g00 cellwise") {
    // g10(x_ik) = 0.1 + 0.2 x_ik, g01 = 0.1, g11 = 0.05
    PairMechanism mech = build_mar_pair({0.1, 0.3}, {0.1, 0.1}, 0.05);
    CHECK(mech.prob(0, 1, 0, 0) == doctest::Approx(0.55));
    CHECK(mech.prob(1, 1, 0, 0) == doctest::Approx(0.55));
    CHECK(mech.prob(0, 0, 0, 0) == doctest::Approx(0.75));
    CHECK(mech.prob(1, 0, 0, 0) == doctest::Approx(0.75));
}

TEST_CASE("cellwise component sum above 1 is rejected") {
    CHECK_THROWS_AS(build_mar_pair({0.6, 0.6}, {0.5, 0.5}, 0.1), std::invalid_argument);
}

TEST_CASE("complement identity holds on every cell") {
    Rng rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        double g11 = 0.25 * rng.uniform();
        std::array<double, 2> g10{0.25 * rng.uniform(), 0.25 * rng.uniform()};
        std::array<double, 2> g01{0.25 * rng.uniform(), 0.25 * rng.uniform()};
        PairMechanism mech = build_mar_pair(g10, g01, g11);
        for (int c = 0; c < 4; ++c) {
            double sum = 0.0;
            for (int o = 0; o < 4; ++o) sum += mech.table[c][o];
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("classification: constructed MAR pairs are MAR-consistent, constants are MCAR") {
    Rng rng(11);
    int nonconstant_seen = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        double g11 = 0.2 * rng.uniform();
        std::array<double, 2> g10{0.3 * rng.uniform(), 0.3 * rng.uniform()};
        std::array<double, 2> g01{0.3 * rng.uniform(), 0.3 * rng.uniform()};
        PairMechanism mech = build_mar_pair(g10, g01, g11);
        PairClass cls = check_mar(mech);
        if (g10[0] == g10[1] && g01[0] == g01[1]) {
            CHECK(cls == PairClass::MCAR);
        } else {
            ++nonconstant_seen;
            CHECK(cls == PairClass::MARConsistent);
        }
    }
    CHECK(nonconstant_seen > 900);  // random doubles essentially never tie

    PairMechanism flat = build_mar_pair({0.2, 0.2}, {0.15, 0.15}, 0.1);
    CHECK(check_mar(flat) == PairClass::MCAR);
}

TEST_CASE("independent per-variable construction with nonconstant marginals is MNAR") {
    PairMechanism mech = build_independent_pair({0.1, 0.45}, {0.2, 0.3});
    CHECK(check_mar(mech) == PairClass::MNAR);

    SUBCASE("constant marginals collapse to MCAR") {
        PairMechanism flat = build_independent_pair({0.25, 0.25}, {0.4, 0.4});
        CHECK(check_mar(flat) == PairClass::MCAR);
    }
}

TEST_CASE("marginals follow the row/column sums") {
    PairMechanism mech = build_mar_pair({0.1, 0.1}, {0.2, 0.2}, 0.05);
    PairMarginals marg = marginals(mech);
    for (int c = 0; c < 4; ++c) {
        CHECK(marg.g1plus[c] == doctest::Approx(0.15));
        CHECK(marg.gplus1[c] == doctest::Approx(0.25));
    }

    SUBCASE("MAR pair with x_ik-dependent g10 has x_ik-tracking g1+") {
        PairMechanism m2 = build_mar_pair({0.1, 0.3}, {0.1, 0.1}, 0.05);
        PairMarginals marg2 = marginals(m2);
        CHECK(marg2.g1plus[PairMechanism::cell(0, 0)] == doctest::Approx(0.15));
        CHECK(marg2.g1plus[PairMechanism::cell(0, 1)] == doctest::Approx(0.35));
        CHECK(marg2.g1plus[PairMechanism::cell(1, 0)] == doctest::Approx(0.15));
        CHECK(marg2.g1plus[PairMechanism::cell(1, 1)] == doctest::Approx(0.35));
    }

    SUBCASE("symmetric mechanism has g1+ equal to g+1 under index swap") {
        PairMechanism sym = build_mar_pair({0.1, 0.3}, {0.1, 0.3}, 0.05);
        PairMarginals ms = marginals(sym);
        for (int x_ij = 0; x_ij < 2; ++x_ij)
            for (int x_ik = 0; x_ik < 2; ++x_ik)
                CHECK(ms.g1plus[PairMechanism::cell(x_ij, x_ik)] ==
                      doctest::Approx(ms.gplus1[PairMechanism::cell(x_ik, x_ij)]));
    }
}

TEST_CASE("validate rejects malformed tables") {
    PairMechanism bad;
    bad.table[0] = {0.5, 0.5, 0.5, 0.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
