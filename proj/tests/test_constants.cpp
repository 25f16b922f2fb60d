#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qfcount/constants.hpp"
#include "qfcount/fixtures.hpp"

using namespace qfc;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Domain;
}

// prod_{j=0..3} (1 - p^-((3-j)s + j u)) * sum_{d, nu <= 3d} delta_p(p^nu) p^-((3d - nu)s + nu u), u = w - k + 1
double local_series(const QuadraticForm& q, i64 p, double s, double w) {
    LocalDensities L(q);
    const int dmax = static_cast<int>(60 / (3 * std::log2(static_cast<double>(p))));
    const double u = w - (q.k() - 1);
    double pre = 1;
    for (int j = 0; j <= 3; ++j) pre *= 1 - std::pow(static_cast<double>(p), -((3 - j) * s + j * u));
    double sum = 0;
    for (int d = 0; d <= dmax; ++d)
        for (int nu = 0; nu <= 3 * d; ++nu) {
            sum += L.delta(p, ipow(p, nu)).get_d() * std::pow(static_cast<double>(p), -((3 * d - nu) * s + nu * u));
        }
    return pre * sum;
}

} // namespace

TEST(Archimedean, FourSquares) {
    EXPECT_NEAR(calC_star(fixtures::four_squares()).value, 2 * std::numbers::pi * std::numbers::pi, 1e-12);
}

TEST(EulerFactor, ClosedFormMatchesLocalSeriesAtGoodPrimes) {
    for (const auto& q : fixtures::all())
        for (i64 p : {3, 5, 7, 11, 13}) {
            if (is_bad_prime(q, p)) continue;
            for (auto [s, w] : {std::pair{2.0, q.k() + 1.0}, std::pair{1.0, 2.0 * q.k() - 1}, std::pair{3.0, q.k() + 2.5}}) {
                double want = local_series(q, p, s, w);
                // the global prefactor L(3w, chi) / L(k, chi) carries these two local factors
                const double c = q.chi()(p), P = static_cast<double>(p);
                double got = euler_factor_Gp(q, p, s, w).real() * (1 - c * std::pow(P, -q.k())) / (1 - c * std::pow(P, -3 * w));
                EXPECT_NEAR(got, want, 1e-12 * std::fabs(want)) << q.name() << " p=" << p << " s=" << s << " w=" << w;
            }
        }
}

TEST(EulerFactor, BadPrimesOfLocallyDeterminedForms) {
    for (const auto& q : {fixtures::four_squares(), fixtures::example3(), fixtures::eight_squares()}) {
        LocalDensities L(q);
        for (i64 p : L.bad()) {
            double want = local_series(q, p, 2.0, q.k() + 1.0);
            EXPECT_NEAR(euler_factor_Gp(q, p, 2.0, q.k() + 1.0).real(), want, 1e-10 * std::fabs(want)) << q.name() << " p=" << p;
        }
    }
    EXPECT_EQ(kind_of([] { euler_factor_Gp(fixtures::six_squares(), 2, 2.0, 5.0); }), ErrorKind::NotLocallyDetermined);
    EXPECT_EQ(kind_of([] { euler_factor_Gp(fixtures::four_squares(), 3, 0.1, 0.1); }), ErrorKind::Domain);
}

TEST(EulerProduct, TruncationBoundsNest) {
    for (const auto& q : {fixtures::four_squares(), fixtures::example3(), fixtures::six_squares()}) {
        auto lo = frakC_W(q, 1000), hi = frakC_W(q, 100000);
        EXPECT_LE(std::fabs(lo.result.value - hi.result.value), lo.result.error + hi.result.error) << q.name();
        EXPECT_LT(hi.result.error, lo.result.error);
    }
    auto a = frakC_Q(fixtures::four_squares(), 1000), b = frakC_Q(fixtures::four_squares(), 100000);
    EXPECT_LE(std::fabs(a.result.value - b.result.value), a.result.error + b.result.error);
    EXPECT_EQ(kind_of([] { frakC_Q(fixtures::six_squares(), 1000); }), ErrorKind::NotLocallyDetermined);
}

TEST(Identities, LevelOne) {
    auto r = verify_level_one(fixtures::e8(), 100000);
    EXPECT_LE(r.discrepancy.hi(), 1e-4);
    EXPECT_LE(r.series_gap, r.series_tail);
    EXPECT_EQ(kind_of([] { verify_level_one(fixtures::four_squares()); }), ErrorKind::NotLevelOne);
}

TEST(Identities, SumsOfSquares) {
    auto r4 = verify_sum_squares(4, 100000);
    EXPECT_EQ(r4.a, 0);
    EXPECT_EQ(r4.b, -3);
    EXPECT_TRUE(r4.factors_ok);
    EXPECT_LE(r4.discrepancy.hi(), 1e-4);
    EXPECT_LE(r4.series_gap, r4.series_tail + 1e-15);
    auto r8 = verify_sum_squares(8, 100000);
    EXPECT_EQ(r8.a, Rational(8, 7));
    EXPECT_EQ(r8.b, Rational(15, 7));
    EXPECT_TRUE(r8.factors_ok);
    EXPECT_LE(r8.discrepancy.hi(), 1e-4);
    EXPECT_EQ(kind_of([] { verify_sum_squares(6); }), ErrorKind::Unsupported);
}

TEST(Dirichlet, PartialSumsApproachTheFactorization) {
    for (const auto& q : {fixtures::four_squares(), fixtures::example3()}) {
        double prev = INFINITY;
        for (i64 N : {100, 1000, 10000}) {
            auto d = dirichlet_check(q, 2, q.k() + 1, N);
            EXPECT_LT(d.discrepancy, prev) << q.name() << " N=" << N;
            prev = d.discrepancy;
        }
        EXPECT_LT(prev, 1e-3);
    }
    EXPECT_EQ(kind_of([] { dirichlet_check(fixtures::four_squares(), 1, 3, 10); }), ErrorKind::Domain);
}

TEST(Leading, PredictedConstantForFourSquares) {
    auto c = leading_constants(fixtures::four_squares(), 100000);
    ASSERT_TRUE(c.predicted_nstar_leading.has_value());
    EXPECT_NEAR(c.predicted_nstar_leading->value, 0.2751587657, 1e-4);
    EXPECT_FALSE(leading_constants(fixtures::six_squares(), 1000).frakC_Q.has_value());
}
