#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "counting.hpp"
#include "fixtures.hpp"
#include "singular.hpp"

namespace qfc {

struct EulerProductReport {
    i64 cutoff = 0;
    double partial = 0; // product over p <= cutoff, prefactor included
    double tail = 0;    // relative bound for the omitted primes
    BoundedNumeric result;
};

namespace detail {

constexpr int d_max = 60;

// prod_{p <= P} f(p) accumulated in logarithms.
template <class F>
BoundedNumeric euler_product(i64 P, F&& f) {
    long double lg = 0;
    i64 count = 0;
    for (i64 p : primes_upto(P)) {
        long double v = f(p);
        if (v <= 0) fail(ErrorKind::Domain, "non-positive Euler factor");
        lg += std::log(v);
        ++count;
    }
    double v = static_cast<double>(std::exp(lg));
    return {v, 8.0 * static_cast<double>(count + 1) * static_cast<double>(std::numeric_limits<long double>::epsilon()) * v};
}

// Relative effect of the primes above P on a product whose factors are 1 + O(p^-2):
// |log tail| <= 4 / (P - 1).
inline double euler_tail(i64 P) { return std::expm1(4.0 / static_cast<double>(P - 1)); }

inline long double generic_factor(long double p, int chi, int m) {
    const long double c = chi, c2 = chi * chi;
    return (1 - 1 / p) * (1 - 1 / p) *
           (1 + 2 / p + 3 * c / std::pow(p, m / 2) + 2 * c2 / std::pow(p, m - 1) + c2 / std::pow(p, m));
}

} // namespace detail

// (1 - 1/p)^4 sum_{d <= 60} p^-d sum_{nu <= 3d} delta_p(p^nu), exactly, with a bound on the rest.
struct BadBlock {
    i64 p = 0;
    Rational truncated;
    double tail = 0;
};

inline BadBlock bad_prime_block(LocalDensities& L, i64 p) {
    BadBlock b;
    b.p = p;
    Rational inner = 0, total = 0, dmax = 0;
    for (int d = 0; d <= detail::d_max; ++d) {
        for (int nu = (d == 0 ? 0 : 3 * d - 2); nu <= 3 * d; ++nu) {
            Rational v = L.delta_ld(p, nu);
            if (v > dmax) dmax = v;
            inner += v;
        }
        total += inner * rational_pow(p, -d);
    }
    Rational f = 1 - Rational(1, p);
    b.truncated = f * f * f * f * total;
    b.truncated.canonicalize();
    // sum_{d > 60} (3d + 1) * 2 max delta / p^d
    double t = 0, pd = std::pow(static_cast<double>(p), -(detail::d_max + 1));
    for (int d = detail::d_max + 1; d < detail::d_max + 200; ++d, pd /= static_cast<double>(p)) t += (3 * d + 1) * pd;
    b.tail = 2.0 * dmax.get_d() * t;
    return b;
}

inline EulerProductReport frakC_Q(LocalDensities& L, i64 P) {
    const auto& q = L.form();
    if (!L.ld_condition().holds) fail(ErrorKind::NotLocallyDetermined, "frakC_Q needs a locally determined form");
    if (P < 3) fail(ErrorKind::InvalidArgument, "frakC_Q: cutoff too small");
    const int m = q.m();
    const Character chi = q.chi();
    BoundedNumeric pre = l_chi(1.5 * m - 2, chi) / (BoundedNumeric(6.0 * m - 8) * l_chi(m / 2.0, chi));
    BoundedNumeric good = detail::euler_product(P, [&](i64 p) -> long double {
        if (is_bad_prime(q, p)) return 1;
        return detail::generic_factor(static_cast<long double>(p), chi(p), m);
    });
    BoundedNumeric bad(1.0);
    for (i64 p : L.bad()) {
        auto b = bad_prime_block(L, p);
        double v = b.truncated.get_d();
        bad *= BoundedNumeric(v, b.tail + detail::rounding(v));
    }
    EulerProductReport r;
    r.cutoff = P;
    BoundedNumeric prod = pre * good * bad;
    r.partial = prod.value;
    r.tail = detail::euler_tail(P);
    r.result = {prod.value, prod.error + r.tail * std::fabs(prod.value)};
    return r;
}

inline EulerProductReport frakC_Q(const QuadraticForm& q, i64 P) {
    LocalDensities L(q);
    return frakC_Q(L, P);
}

inline EulerProductReport frakC_W(const QuadraticForm& q, i64 P) {
    if (P < 3) fail(ErrorKind::InvalidArgument, "frakC_W: cutoff too small");
    const int m = q.m();
    const Character chi = q.chi();
    BoundedNumeric pre = l_chi(1.5 * m - 2, chi) / BoundedNumeric(6.0 * m - 8);
    BoundedNumeric prod = pre * detail::euler_product(P, [&](i64 p) -> long double {
        return detail::generic_factor(static_cast<long double>(p), chi(p), m);
    });
    EulerProductReport r;
    r.cutoff = P;
    r.partial = prod.value;
    r.tail = detail::euler_tail(P);
    r.result = {prod.value, prod.error + r.tail * std::fabs(prod.value)};
    return r;
}

struct LeadingConstants {
    BoundedNumeric calC_star;
    BoundedNumeric calC;
    BoundedNumeric calC_prime_star;
    BoundedNumeric calC_prime;
    std::optional<BoundedNumeric> frakC_Q;
    std::optional<BoundedNumeric> predicted_nstar_leading; // calC_star * frakC_Q when locally determined
};

inline BoundedNumeric calC_star(const QuadraticForm& q) {
    const int m = q.m();
    double v = 2.0 * std::pow(2.0 * std::numbers::pi, m / 2.0) / (gamma_half_m(m) * std::sqrt(q.invariants().det_A.get_d()));
    return {v, 16 * std::numeric_limits<double>::epsilon() * v};
}

inline LeadingConstants leading_constants(const QuadraticForm& q, i64 P = 100000) {
    const int m = q.m();
    LeadingConstants c;
    c.calC_star = calC_star(q);
    BoundedNumeric denom = BoundedNumeric(static_cast<double>((m - 1) * (m - 1))) * zeta(m - 1.0);
    c.calC = c.calC_star / denom;
    c.calC_prime_star = c.calC_star / l_chi(m / 2.0, q);
    c.calC_prime = c.calC_prime_star / denom;
    LocalDensities L(q);
    if (L.ld_condition().holds) {
        c.frakC_Q = frakC_Q(L, P).result;
        c.predicted_nstar_leading = c.calC_star * *c.frakC_Q;
    }
    return c;
}

struct IdentityCheck {
    BoundedNumeric lhs;
    BoundedNumeric rhs;
    BoundedNumeric discrepancy; // |lhs - rhs| / |rhs|
    Rational series;            // truncated 2-part series
    Rational closed;            // its closed form
    double series_gap = 0;      // |series - closed|
    double series_tail = 0;     // bound for the truncation of the series
    bool factors_ok = true;     // factor-by-factor identity at small p (sum of squares only)
    Rational a, b;              // sum of squares only
};

inline IdentityCheck verify_level_one(const QuadraticForm& q, i64 P = 100000) {
    if (q.invariants().level != 1) fail(ErrorKind::NotLevelOne, "verify_level_one needs a level-one form");
    const int m = q.m();
    LocalDensities L(q);
    IdentityCheck r;
    r.lhs = calC_star(q) * frakC_Q(L, P).result;
    BoundedNumeric pre = BoundedNumeric(std::pow(2.0 * std::numbers::pi, m / 2.0)) * zeta(1.5 * m - 2) /
                         (BoundedNumeric((3.0 * m - 4) * gamma_half_m(m)) * zeta(m / 2.0));
    BoundedNumeric prod = detail::euler_product(P, [&](i64 p) { return detail::generic_factor(static_cast<long double>(p), 1, m); });
    r.rhs = pre * prod;
    r.rhs.error += detail::euler_tail(P) * std::fabs(r.rhs.value);
    r.discrepancy = relative_discrepancy(r.lhs, r.rhs);
    // sum_d 2^-d sum_{nu <= 3d} delta_2(2^nu) against its closed form
    Rational inner = 0;
    r.series = 0;
    for (int d = 0; d <= detail::d_max; ++d) {
        for (int nu = (d == 0 ? 0 : 3 * d - 2); nu <= 3 * d; ++nu) inner += delta2_level_one(m, nu);
        r.series += inner * rational_pow(2, -d);
    }
    const int k = m / 2;
    r.closed = 4 * (1 - rational_pow(2, -k)) / (1 - rational_pow(2, -(3 * m / 2 - 2))) *
               (1 + Rational(2, 2) + 3 * rational_pow(2, -k) + 2 * rational_pow(2, -(m - 1)) + rational_pow(2, -m));
    r.closed.canonicalize();
    r.series_gap = std::fabs(Rational(r.series - r.closed).get_d());
    double t = 0;
    for (int d = detail::d_max + 1; d < detail::d_max + 200; ++d) t += 2.0 * (3 * d + 1) * std::pow(2.0, -d);
    r.series_tail = t;
    return r;
}

// The 2-adic and odd local factors of the sum-of-squares identity, m = 4k.
inline Rational frakG2_sum_squares(int m) {
    const int k = m / 4, e = 2 * k - 1;
    const int sg = (k % 2 == 0) ? 1 : -1;
    Rational a = 1 - Rational(sg) / (1 - rational_pow(2, e));
    Rational b = Rational(sg) * (1 - rational_pow(2, 2 * k)) / (1 - rational_pow(2, e));
    const int s = 1, w = e;
    Rational pre = 1;
    for (int j = 1; j <= 3; ++j) pre *= 1 - rational_pow(2, -(s + j * w - j * e));
    Rational t1 = a * (1 + rational_pow(2, -w + e) + rational_pow(2, -2 * w + 2 * e)) /
                  (rational_pow(2, s + w - e) - rational_pow(2, -2 * w + 2 * e));
    Rational t2 = b * rational_pow(2, -s - w) * (1 + rational_pow(2, -w) + rational_pow(2, -2 * w)) / (1 - rational_pow(2, -s - 3 * w));
    Rational g = pre * (1 + t1 - t2);
    g.canonicalize();
    return g;
}

inline Rational frakGp_sum_squares(int m, i64 p) {
    const int k = m / 4, e = 2 * k - 1;
    const int s = 1, w = e;
    auto pw = [&](int x) { return rational_pow(p, x); };
    Rational first = 1 + (pw(e) + 1) * pw(-(s + w)) + (pw(2 * e) + pw(e) + 1) * pw(-(s + 2 * w)) +
                     (pw(4 * k - 2) + pw(e)) * pw(-(s + 3 * w)) + pw(4 * k - 2) * pw(-(2 * s + 4 * w));
    Rational g = first * (1 - pw(e) * pw(-(s + w))) * (1 - pw(2 * e) * pw(-(s + 2 * w))) / (1 - pw(-(s + 3 * w)));
    g.canonicalize();
    return g;
}

inline IdentityCheck verify_sum_squares(int m, i64 P = 100000) {
    if (m != 4 && m != 8) fail(ErrorKind::Unsupported, "verify_sum_squares supports m = 4 and m = 8");
    auto q = fixtures::sum_of_squares(m);
    LocalDensities L(q);
    const int k = m / 4, e = 2 * k - 1;
    const int sg = (k % 2 == 0) ? 1 : -1;
    IdentityCheck r;
    r.a = 1 - Rational(sg) / (1 - rational_pow(2, e));
    r.b = Rational(sg) * (1 - rational_pow(2, 2 * k)) / (1 - rational_pow(2, e));
    r.a.canonicalize();
    r.b.canonicalize();
    // 2-part: (1/2)^4 sum_d 2^-d sum_{nu <= 3d} delta_2(2^nu) = G_2(1, 2k - 1)
    auto blk = bad_prime_block(L, 2);
    r.series = blk.truncated;
    r.closed = frakG2_sum_squares(m);
    r.series_gap = std::fabs(Rational(r.series - r.closed).get_d());
    r.series_tail = blk.tail;
    // odd p <= 50: generic factor / (1 - p^-(3m/2-2)) = G_p(1, 2k - 1)
    for (i64 p : primes_upto(50)) {
        if (p == 2) continue;
        Rational lhs = (1 + Rational(2, p) + 3 * rational_pow(p, -m / 2) + 2 * rational_pow(p, -(m - 1)) + rational_pow(p, -m)) *
                       (1 - Rational(1, p)) * (1 - Rational(1, p)) / (1 - rational_pow(p, -(3 * m / 2 - 2)));
        lhs.canonicalize();
        if (lhs != frakGp_sum_squares(m, p)) r.factors_ok = false;
    }
    r.lhs = calC_star(q) * frakC_Q(L, P).result;
    BoundedNumeric pre = BoundedNumeric(std::pow(std::numbers::pi, m / 2.0) / (1 - std::pow(2.0, -m / 2.0))) /
                         (BoundedNumeric(gamma_half_m(m) * (3.0 * m - 4)) * zeta(m / 2.0));
    BoundedNumeric prod = detail::euler_product(P, [&](i64 p) -> long double {
        if (p == 2) return frakG2_sum_squares(m).get_d();
        return static_cast<long double>(frakGp_sum_squares(m, p).get_d());
    });
    r.rhs = pre * prod;
    r.rhs.error += detail::euler_tail(P) * std::fabs(r.rhs.value);
    r.discrepancy = relative_discrepancy(r.lhs, r.rhs);
    return r;
}

// Local factor of the Euler product G(s, w) for the Dirichlet series of
// 1_3(a n) n^(k-1) S(n, Q) / (a^s n^w).
inline std::complex<double> euler_factor_Gp(LocalDensities& L, i64 p, std::complex<double> s, std::complex<double> w) {
    const auto& q = L.form();
    const int k = q.k();
    double minre = INFINITY;
    for (int j = 0; j <= 3; ++j) minre = std::min(minre, ((3.0 - j) * s + static_cast<double>(j) * (w - static_cast<double>(k - 1))).real());
    if (minre < 0.5) fail(ErrorKind::Domain, "euler_factor_Gp: outside the region of absolute convergence");
    const double lp = std::log(static_cast<double>(p));
    auto pm = [&](std::complex<double> z) { return std::exp(-z * lp); }; // p^-z
    const std::complex<double> u = w - static_cast<double>(k - 1);     // w - k + 1
    if (!is_bad_prime(q, p)) {
        const double c = q.chi()(p), c2 = c * c;
        std::complex<double> x1 = pm(2.0 * s + u), x2 = pm(s + 2.0 * u);
        std::complex<double> inner = 1.0 + x1 + x2 + c * pm(2.0 * s + w) + c * pm(s + 2.0 * w - static_cast<double>(k - 1)) +
                                     c * pm(3.0 * w - static_cast<double>(2 * k - 2)) + c2 * pm(s + 2.0 * w) +
                                     c2 * pm(3.0 * w - static_cast<double>(k - 1)) + c2 * pm(2.0 * s + 4.0 * w - static_cast<double>(2 * k - 2));
        return (1.0 - x1) * (1.0 - x2) * inner;
    }
    if (!L.ld_condition().holds) fail(ErrorKind::NotLocallyDetermined, "bad-prime factor needs a locally determined form");
    std::complex<double> pre = 1.0;
    for (int j = 0; j <= 3; ++j) pre *= 1.0 - pm((3.0 - j) * s + static_cast<double>(j) * u);
    std::complex<double> sum = 0.0;
    for (int d = 0; d <= detail::d_max; ++d)
        for (int nu = 0; nu <= 3 * d; ++nu)
            sum += L.delta_ld(p, nu).get_d() * pm(static_cast<double>(3 * d - nu) * s + static_cast<double>(nu) * u);
    return pre * sum;
}

inline std::complex<double> euler_factor_Gp(const QuadraticForm& q, i64 p, std::complex<double> s, std::complex<double> w) {
    LocalDensities L(q);
    return euler_factor_Gp(L, p, s, w);
}

struct DirichletCheck {
    double lhs = 0;  // sum over a, n <= N
    double rhs = 0;  // product of four zeta values times G(s, w)
    double discrepancy = 0;
};

// Compares the partial double sum of the Dirichlet series at real (s, w) with
// its factorization, the Euler product truncated at 10^4.
inline DirichletCheck dirichlet_check(const QuadraticForm& q, double s, double w, i64 N) {
    const int k = q.k();
    if (s < 2 || w < k + 1) fail(ErrorKind::Domain, "dirichlet_check needs s >= 2 and w >= k + 1");
    if (N < 1) fail(ErrorKind::InvalidArgument, "dirichlet_check: N must be positive");
    SingularSeries S(q);
    if (!S.local().ld_condition().holds) fail(ErrorKind::NotLocallyDetermined, "dirichlet_check needs a locally determined form");
    auto a0 = detail::cube_complements(N);
    long double lhs = 0;
    for (i64 n = 1; n <= N; ++n) {
        if (a0[n] > N) continue;
        // a = a0 t^3 <= N
        long double asum = 0;
        for (i64 t = 1; a0[n] * t * t * t <= N; ++t) asum += std::pow(static_cast<long double>(a0[n] * t * t * t), -s);
        lhs += asum * std::pow(static_cast<long double>(n), static_cast<long double>(k - 1) - w) * S.rational_part(n).get_d();
    }
    DirichletCheck r;
    r.lhs = static_cast<double>(lhs / S.l_value().value);
    double z = 1;
    for (int j = 0; j <= 3; ++j) z *= zeta((3 - j) * s + j * (w - k + 1)).value;
    double G = l_chi(3 * w, q).value / S.l_value().value;
    for (i64 p : primes_upto(10000)) G *= euler_factor_Gp(S.local(), p, s, w).real();
    r.rhs = z * G;
    r.discrepancy = std::fabs(r.lhs - r.rhs) / std::fabs(r.rhs);
    return r;
}

} // namespace qfc
