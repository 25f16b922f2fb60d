#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qfcount/density.hpp"
#include "qfcount/fixtures.hpp"
#include "random_forms.hpp"

using namespace qfc;

namespace {

const std::vector<QuadraticForm>& quaternary() {
    static const std::vector<QuadraticForm> v{fixtures::four_squares(), fixtures::example3(), fixtures::calibration()};
    return v;
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Domain;
}

} // namespace

TEST(BadPrimes, FormulaMatchesCounting) {
    for (const auto& q : quaternary())
        for (i64 p : bad_primes(q)) {
            for (i64 n = 1; n <= 24; ++n) {
                const int v = valuation(n, p).nu;
                if (v > 1 || (p == 2 && n > 12)) continue;
                const int nu_max = p == 2 ? 5 + v : 3 + v;
                auto want = oracle::settled_density(q, p, n, nu_max);
                ASSERT_TRUE(want.has_value()) << q.name() << " p=" << p << " n=" << n;
                EXPECT_EQ(delta_bad(q, p, n), *want) << q.name() << " p=" << p << " n=" << n;
            }
        }
}

TEST(GoodPrimes, FormulaMatchesCounting) {
    for (const auto& q : quaternary())
        for (i64 p : {3, 5, 7}) {
            if (is_bad_prime(q, p)) continue;
            for (i64 n : {1, 2, 3, 5, 7, 9, 14, 15}) {
                // Hensel: at p not dividing 2|A| the count settles at nu_p(n) + 1
                int nu = valuation(n, p).nu;
                EXPECT_EQ(delta_good(q, p, nu), oracle::count_density(q, p, n, nu + 1)) << q.name() << " p=" << p << " n=" << n;
            }
        }
}

TEST(Oracle, EnginesAgreeAndScale) {
    for (const auto& q : fixtures::all()) {
        LocalDensities L(q);
        for (i64 p : L.bad())
            for (i64 n = 1; n <= 12; ++n) {
                auto o = L.oracle(p, n);
                ASSERT_EQ(o.counts.size(), 2u);
                i128 scale = 1;
                for (int i = 0; i < q.m() - 1; ++i) scale *= p;
                EXPECT_TRUE(o.counts[1] == scale * o.counts[0]) << q.name() << " p=" << p << " n=" << n;
                EXPECT_EQ(o.density, L.delta_bad(p, n)) << q.name() << " p=" << p << " n=" << n;
            }
    }
}

TEST(KnownValues, SmallCases) {
    auto four = fixtures::four_squares();
    EXPECT_EQ(delta_bad(four, 2, 2), Rational(3, 2));
    EXPECT_EQ(delta_bad(fixtures::e8(), 2, 1), Rational(15, 16));
    // the exponent of v_r: only the calibrated choice reproduces counting at p = 3, n = 9
    auto J = jordan_odd(four, 3);
    EXPECT_EQ(delta_yang_odd(J, 9, VrConvention::Calibrated), Rational(104, 81));
    EXPECT_EQ(delta_yang_odd(J, 9, VrConvention::Literal), Rational(70, 81));
    EXPECT_EQ(oracle::count_density(four, 3, 9, 4), Rational(104, 81));
}

TEST(Calibration, YangFormulaAtGoodPrimesMatchesLocalFactor) {
    for (const auto& q : fixtures::all())
        for (i64 p : {3, 5, 7}) {
            if (is_bad_prime(q, p)) continue;
            auto J = jordan_odd(q, p);
            for (i64 n = 1; n <= 60; ++n)
                ASSERT_EQ(delta_yang_odd(J, n), delta_good(q, p, valuation(n, p).nu)) << q.name() << " p=" << p << " n=" << n;
        }
}

TEST(ClosedForms, SumsOfSquaresAndLevelOne) {
    for (int m : {4, 8})
        for (int nu = 0; nu <= 10; ++nu)
            EXPECT_EQ(delta2_sum_squares(m, nu), delta_bad(fixtures::sum_of_squares(m), 2, i64(1) << nu)) << m << " " << nu;
    for (int nu = 0; nu <= 10; ++nu) EXPECT_EQ(delta2_level_one(8, nu), delta_bad(fixtures::e8(), 2, i64(1) << nu));
    EXPECT_EQ(kind_of([] { delta2_sum_squares(6, 1); }), ErrorKind::ConditionNotSatisfied);
}

// Scaling y by a unit u sends the count for n to the count for u^2 n.
TEST(Properties, InvariantUnderUnitSquares) {
    for (const auto& q : fixtures::all()) {
        LocalDensities L(q);
        for (i64 p : L.bad())
            for (i64 n = 1; n <= 30; ++n)
                for (i64 u : {3, 5, 7, 11}) {
                    if (u % p == 0) continue;
                    ASSERT_EQ(L.delta_bad(p, n), L.delta_bad(p, n * u * u)) << q.name() << " p=" << p << " n=" << n;
                }
    }
}

// Densities depend on n only through its class mod p^K for K large.
TEST(Properties, PeriodicInN) {
    for (const auto& q : quaternary()) {
        LocalDensities L(q);
        for (i64 p : L.bad()) {
            i64 P = ipow(p, valuation(q.invariants().det_A, p) + 4);
            for (i64 n = 1; n <= 20; ++n)
                if (valuation(n, p).nu <= 1) ASSERT_EQ(L.delta_bad(p, n), L.delta_bad(p, n + P));
        }
    }
}

TEST(Properties, DensitiesArePositiveRationals) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 30; ++t) {
        auto q = testing_forms::random_form(rng, 4 + 2 * static_cast<int>(t % 3));
        LocalDensities L(q);
        for (i64 p : L.bad()) {
            if (p > 50) continue;
            for (i64 n = 1; n <= 20; ++n) EXPECT_GE(L.delta_bad(p, n), 0) << testing_forms::describe(q);
        }
    }
}

TEST(LocallyDetermined, WitnessesAndAgreement) {
    EXPECT_TRUE(ld_condition(fixtures::four_squares()).holds);
    EXPECT_TRUE(ld_condition(fixtures::example3()).holds);
    EXPECT_TRUE(ld_condition(fixtures::e8()).holds);
    auto w = ld_condition(fixtures::six_squares());
    EXPECT_FALSE(w.holds);
    EXPECT_EQ(w.p, 2);
    EXPECT_EQ(w.r, 2);
    EXPECT_EQ(w.quantity, "kappa");
    EXPECT_EQ(w.value, 6);
    EXPECT_FALSE(ld_condition(fixtures::calibration()).holds);

    auto e = ld_empirical(fixtures::six_squares(), 40);
    EXPECT_FALSE(e.holds);
    EXPECT_NE(e.value, e.reference);
    EXPECT_TRUE(ld_empirical(fixtures::four_squares(), 200).holds);
    EXPECT_TRUE(ld_empirical(fixtures::example3(), 200).holds);
}

TEST(LocallyDetermined, ClosedFormMatchesGeneralFormula) {
    for (const auto& q : {fixtures::four_squares(), fixtures::example3(), fixtures::e8(), fixtures::eight_squares()}) {
        LocalDensities L(q);
        for (i64 p : L.bad())
            for (int nu = 0; nu <= 8; ++nu)
                if (ipow(p, nu) < (i64(1) << 40)) ASSERT_EQ(L.delta_ld(p, nu), L.delta_bad(p, ipow(p, nu))) << q.name() << " p=" << p << " nu=" << nu;
    }
    EXPECT_EQ(kind_of([] { delta_ld(fixtures::six_squares(), 2, 1); }), ErrorKind::ConditionNotSatisfied);
}

TEST(Varpi, BoundsHoldWhereApplicable) {
    auto six = fixtures::six_squares();
    auto b = varpi_bounds(six);
    EXPECT_EQ(b.lower, Rational(1, 50));
    EXPECT_EQ(b.upper, Rational(99, 50));
    for (const auto& q : {six, fixtures::eight_squares(), fixtures::e8()}) {
        auto bb = varpi_bounds(q);
        LocalDensities L(q);
        for (i64 n = 1; n <= 2000; ++n) {
            Rational v = L.varpi(n);
            ASSERT_TRUE(bb.lower <= v && v <= bb.upper) << q.name() << " n=" << n << " " << v;
        }
    }
    EXPECT_EQ(kind_of([] { varpi_bounds(fixtures::four_squares()); }), ErrorKind::AssumptionViolated);
}

TEST(Errors, BranchAndArgumentChecks) {
    auto q = fixtures::four_squares();
    EXPECT_EQ(kind_of([&] { delta_bad(q, 3, 1); }), ErrorKind::WrongBranch);
    EXPECT_EQ(kind_of([&] { delta_bad(q, 2, 0); }), ErrorKind::InvalidArgument);
}
