#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qfcount/fixtures.hpp"
#include "qfcount/lfunc.hpp"
#include "qfcount/singular.hpp"

using namespace qfc;

namespace {

double pi() { return std::numbers::pi; }

i64 jacobi_four_squares(i64 n) { return 8 * oracle::sigma(n, 1) - (n % 4 == 0 ? 32 * oracle::sigma(n / 4, 1) : 0); }

i64 jacobi_eight_squares(i64 n) {
    i64 s = 0;
    for (i64 d = 1; d <= n; ++d)
        if (n % d == 0) s += ((n + d) % 2 == 0 ? 1 : -1) * d * d * d;
    return 16 * s;
}

} // namespace

TEST(Zeta, KnownValues) {
    auto z2 = zeta(2), z3 = zeta(3), z4 = zeta(4);
    EXPECT_TRUE(z2.contains(pi() * pi() / 6) || std::fabs(z2.value - pi() * pi() / 6) < 4e-16);
    EXPECT_NEAR(z3.value, 1.2020569031595942, 1e-14);
    EXPECT_NEAR(z4.value, std::pow(pi(), 4) / 90, 1e-14);
    EXPECT_LT(z2.error, 1e-12);
}

TEST(LFunction, PrincipalCharacters) {
    EXPECT_NEAR(l_chi(2, fixtures::four_squares()).value, pi() * pi() / 8, 1e-13);
    EXPECT_NEAR(l_chi(4, fixtures::e8()).value, std::pow(pi(), 4) / 96, 1e-13);
    EXPECT_NEAR(l_chi(2, fixtures::example3()).value, pi() * pi() / 9, 1e-13);
}

TEST(LFunction, QuadraticCharacterAgainstDirectSum) {
    auto q = fixtures::calibration();
    Character chi = q.chi();
    double s = 0;
    for (i64 n = 2000000; n >= 1; --n) s += chi(n) / (static_cast<double>(n) * n);
    auto L = l_chi(2, q);
    EXPECT_NEAR(L.value, s, 1e-10);
    EXPECT_NEAR(L.value, 0.949703, 5e-7);
}

TEST(GaussSums, AgreeWithDirectSummation) {
    std::mt19937_64 rng(42);
    for (const auto& q : fixtures::all()) {
        GaussSums G(q);
        const i64 cmax = q.m() == 4 ? 14 : (q.m() == 6 ? 7 : 5);
        for (i64 c = 1; c <= cmax; ++c)
            for (int t = 0; t < 4; ++t) {
                i64 d;
                do d = static_cast<i64>(rng() % static_cast<u64>(4 * c)) - 2 * c;
                while (d == 0 || std::gcd(c, abs64(d)) != 1);
                std::vector<i64> u(q.m());
                for (auto& x : u) x = static_cast<i64>(rng() % static_cast<u64>(3 * c)) - c;
                auto g = G(c, d, u);
                auto want = oracle::gauss_sum(q, c, d, u);
                double tol = 1e-9 * std::pow(static_cast<double>(c), q.m() / 2.0) + g.value.error;
                ASSERT_LT(std::abs(g.value.value - want), tol) << q.name() << " c=" << c << " d=" << d;
                ASSERT_TRUE(gauss_bound_holds(g));
            }
    }
}

TEST(GaussSums, RejectsNonCoprime) {
    EXPECT_THROW(gauss_sum(fixtures::four_squares(), 6, 4, {0, 0, 0, 0}), Error);
}

TEST(MainTerm, SumsOfSquaresHaveNoCuspContribution) {
    SingularSeries s4(fixtures::four_squares()), s8(fixtures::eight_squares());
    for (i64 n = 1; n <= 60; ++n) {
        EXPECT_NEAR(r_main_term(s4, n).value, static_cast<double>(jacobi_four_squares(n)), 1e-9 * jacobi_four_squares(n)) << n;
        EXPECT_NEAR(r_main_term(s8, n).value, static_cast<double>(jacobi_eight_squares(n)), 1e-9 * jacobi_eight_squares(n)) << n;
    }
}

TEST(MainTerm, E8IsAnEisensteinSeries) {
    SingularSeries s(fixtures::e8());
    for (i64 n = 1; n <= 50; ++n) {
        double want = 240.0 * static_cast<double>(oracle::sigma(n, 3));
        EXPECT_NEAR(r_main_term(s, n).value, want, 1e-9 * want) << n;
    }
}

TEST(MainTerm, BruteForceRepresentationCounts) {
    auto r4 = oracle::rep_counts(fixtures::four_squares(), 40, 7);
    auto r8 = oracle::rep_counts(fixtures::eight_squares(), 8, 3);
    for (i64 n = 1; n <= 40; ++n) EXPECT_EQ(r4[n], jacobi_four_squares(n));
    for (i64 n = 1; n <= 8; ++n) EXPECT_EQ(r8[n], jacobi_eight_squares(n));
}

// Each term of the c-series, recomputed from direct Gauss sums with u = 0.
TEST(CSeries, TermsMatchGaussSums) {
    for (const auto& q : {fixtures::four_squares(), fixtures::example3()}) {
        auto reps = singular_series_csum(q, std::vector<i64>{1, 2, 3, 6}, 10);
        for (const auto& r : reps) {
            double acc = 0;
            for (i64 c = 1; c <= 10; ++c) {
                std::complex<double> term = 0;
                for (i64 d = 1; d <= c; ++d) {
                    if (std::gcd(c, d) != 1) continue;
                    term += oracle::gauss_sum(q, c, d, std::vector<i64>(4, 0)) *
                            std::polar(1.0, -2 * pi() * static_cast<double>(d * r.n % c) / static_cast<double>(c));
                }
                acc += term.real() / std::pow(static_cast<double>(c), 4);
                EXPECT_NEAR(r.partial[c - 1].get_d(), acc, 1e-9) << q.name() << " n=" << r.n << " c=" << c;
            }
        }
    }
}

TEST(CSeries, RamanujanSums) {
    for (i64 c = 1; c <= 30; ++c)
        for (i64 x = 0; x < c; ++x) {
            double s = 0;
            for (i64 d = 1; d <= c; ++d)
                if (std::gcd(c, d) == 1) s += std::cos(2 * pi() * static_cast<double>(d * x) / static_cast<double>(c));
            ASSERT_NEAR(static_cast<double>(detail::ramanujan_sum(c, x)), s, 1e-9);
        }
}

TEST(CSeries, BudgetIsEnforced) {
    EXPECT_THROW(singular_series_csum(fixtures::e8(), 1, 10), Error);
    EXPECT_THROW(singular_series_csum(fixtures::four_squares(), 1, 200), Error);
}

TEST(SingularSeries, RationalPartAndValue) {
    SingularSeries s(fixtures::four_squares());
    for (i64 n = 1; n <= 30; ++n) {
        auto v = s(n);
        EXPECT_GT(v.value.value, 0);
        EXPECT_NEAR(v.value.value, v.rational_part.get_d() / v.l_value.value, 1e-12);
    }
}
