#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qfcount/density.hpp"
#include "qfcount/fixtures.hpp"
#include "random_forms.hpp"

using namespace qfc;

namespace {

// U^T M U mod W computed directly.
std::vector<i64> transform(const std::vector<i64>& M, const std::vector<i64>& U, int m, i64 W) {
    std::vector<i64> out(static_cast<size_t>(m) * m, 0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            i128 s = 0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) s = (s + static_cast<i128>(U[i * m + a]) * M[i * m + j] % W * U[j * m + b]) % W;
            out[a * m + b] = static_cast<i64>((s % W + W) % W);
        }
    return out;
}

void check_odd(const QuadraticForm& q, i64 p) {
    auto J = jordan_odd(q, p);
    ASSERT_TRUE(verify_equivalence(q, J)) << testing_forms::describe(q) << " p=" << p;
    const int m = q.m();
    i64 W = ipow(p, J.K);
    auto T = transform(q.matrix(), J.U, m, W);
    int total = 0;
    for (int h = 0; h < m; ++h) {
        for (int g = 0; g < m; ++g)
            if (g != h) ASSERT_EQ(T[h * m + g], 0);
        // the diagonal of A is 2 p^alpha unit
        ASSERT_EQ(T[h * m + h], mulmod(2 * ipow(p, J.blocks[h].alpha) % W, J.blocks[h].unit, W));
        ASSERT_NE(J.blocks[h].eps % p, 0);
        total += J.blocks[h].alpha;
    }
    EXPECT_EQ(total, valuation(q.invariants().det_A, p));
}

void check_two(const QuadraticForm& q) {
    auto J = jordan_two(q);
    ASSERT_TRUE(verify_equivalence(q, J)) << testing_forms::describe(q);
    int total = 0;
    for (const auto& d : J.diag) {
        EXPECT_EQ(d.eps % 2, 1);
        total += d.alpha + 1;
    }
    for (const auto* list : {&J.type2, &J.type3})
        for (const auto& t : *list) {
            EXPECT_EQ(t.a % 2, 0);
            EXPECT_EQ(t.c % 2, 0);
            EXPECT_NE(t.b % 2, 0);
            total += 2 * t.scale;
        }
    for (const auto& t : J.type2) EXPECT_EQ(mod(t.a * t.c - t.b * t.b, 8), 7);
    for (const auto& t : J.type3) EXPECT_EQ(mod(t.a * t.c - t.b * t.b, 8), 3);
    EXPECT_EQ(total, valuation(q.invariants().det_A, 2));
}

} // namespace

TEST(Jordan, FixturesDecomposeAtEveryBadPrime) {
    for (const auto& q : fixtures::all())
        for (i64 p : bad_primes(q)) {
            if (p == 2)
                check_two(q);
            else
                check_odd(q, p);
        }
}

TEST(Jordan, RandomFormsDecompose) {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 150; ++t) {
        int m = 4 + 2 * static_cast<int>(rng() % 2);
        auto q = testing_forms::random_form(rng, m);
        check_two(q);
        for (i64 p : bad_primes(q))
            if (p != 2 && p < 50) check_odd(q, p);
    }
}

TEST(Jordan, KnownShapes) {
    auto J = jordan_two(fixtures::e8());
    EXPECT_TRUE(J.diag.empty());
    EXPECT_EQ(J.type2.size() + J.type3.size(), 4u);
    auto K = jordan_two(fixtures::example3());
    EXPECT_EQ(K.type3.size() + K.type2.size(), 1u);
    auto O = jordan_odd(fixtures::example3(), 3);
    int nonzero = 0;
    for (const auto& b : O.blocks) nonzero += b.alpha > 0;
    EXPECT_EQ(nonzero, 2);
}

// A Jordan decomposition at p determines the p-adic densities; cross-check
// against brute-force counting on random quaternary forms.
TEST(Jordan, RandomFormDensitiesMatchCounting) {
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int t = 0; t < 40 && checked < 25; ++t) {
        auto q = testing_forms::random_form(rng, 4, 2);
        for (i64 p : bad_primes(q)) {
            if (p > 3) continue;
            const int nu_max = p == 2 ? 5 : 3;
            for (i64 n : {1, 2, 3, 5, 6}) {
                if (valuation(n, p).nu + (p == 2 ? 3 : 1) > nu_max) continue;
                auto want = oracle::settled_density(q, p, n, nu_max);
                if (!want) continue;
                EXPECT_EQ(delta_bad(q, p, n), *want) << "p=" << p << " n=" << n << " form " << testing_forms::describe(q);
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 10);
}
