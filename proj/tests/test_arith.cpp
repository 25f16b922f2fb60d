#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qfcount/arith.hpp"
#include "qfcount/exact.hpp"

using namespace qfc;

TEST(Jacobi, MatchesEulerCriterionAtPrimes) {
    for (i64 p : primes_upto(200)) {
        if (p == 2) continue;
        for (i64 a = -60; a <= 60; ++a) {
            i64 e = powmod(a, (p - 1) / 2, p);
            int want = e == 0 ? 0 : (e == 1 ? 1 : -1);
            ASSERT_EQ(jacobi(a, p), want) << a << " " << p;
        }
    }
}

TEST(Jacobi, MultiplicativeInModulus) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 2000; ++t) {
        i64 q1 = 2 * static_cast<i64>(rng() % 200) + 1, q2 = 2 * static_cast<i64>(rng() % 200) + 1;
        i64 a = static_cast<i64>(rng() % 1000) - 500;
        ASSERT_EQ(jacobi(a, q1 * q2), jacobi(a, q1) * jacobi(a, q2));
    }
}

TEST(Jacobi, RejectsEvenModulus) {
    EXPECT_THROW(jacobi(3, 8), Error);
}

TEST(Roots, IntegerSquareAndCubeRoots) {
    for (u64 n = 0; n < 5000; ++n) {
        u64 s = isqrt(n), c = icbrt(n);
        ASSERT_TRUE(s * s <= n && (s + 1) * (s + 1) > n);
        ASSERT_TRUE(c * c * c <= n && (c + 1) * (c + 1) * (c + 1) > n);
    }
    EXPECT_EQ(icbrt(999999999999999999ULL), 999999ULL);
    EXPECT_EQ(icbrt(1000000000000000000ULL), 1000000ULL);
}

TEST(Cubes, IndicatorAndComplement) {
    for (i64 n = 1; n <= 3000; ++n) {
        ASSERT_EQ(cube_indicator(n), icbrt(n) * icbrt(n) * icbrt(n) == static_cast<u64>(n));
        i64 a0 = cube_complement(n);
        ASSERT_EQ(cube_indicator(a0 * n), 1);
        if (n <= 150) {
            for (i64 a = 1; a < a0; ++a) ASSERT_EQ(cube_indicator(a * n), 0) << n;
        }
    }
}

TEST(Mobius, TableMatchesFactorization) {
    auto mu = mobius_table(2000);
    for (i64 n = 1; n <= 2000; ++n) ASSERT_EQ(mu[n], mobius(n));
    i64 s = 0;
    for (i64 d = 1; d <= 360; ++d)
        if (360 % d == 0) s += mu[d];
    EXPECT_EQ(s, 0);
}

TEST(Valuation, SplitsPrimePower) {
    auto v = valuation(i64(3 * 3 * 3 * 10), 3);
    EXPECT_EQ(v.nu, 3);
    EXPECT_EQ(v.unit_part, 10);
    EXPECT_THROW(valuation(i64(0), 3), Error);
}

TEST(Character, PrincipalDetection) {
    EXPECT_TRUE(Character(4).principal());
    EXPECT_TRUE(Character(36).principal());
    EXPECT_FALSE(Character(12).principal());
    EXPECT_FALSE(Character(-4).principal());
    Character chi(-4);
    EXPECT_EQ(chi(1), 1);
    EXPECT_EQ(chi(3), -1);
    EXPECT_EQ(chi(5), 1);
    EXPECT_EQ(chi(2), 0);
}

TEST(SigmaChi, PrincipalCaseIsDivisorSum) {
    for (i64 n = 1; n <= 200; ++n) {
        Rational want = 0;
        for (i64 d = 1; d <= n; ++d)
            if (n % d == 0 && d % 2 == 1) want += Rational(1, static_cast<unsigned long>(d * d));
        want.canonicalize();
        ASSERT_EQ(sigma_chi(n, 3, 4), want) << n;
    }
}

TEST(Exact, AlgebraicValueArithmetic) {
    auto r3 = AlgebraicValue::half_power(3, 1);
    EXPECT_EQ((r3 * r3).to_rational(), Rational(3));
    EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
}
