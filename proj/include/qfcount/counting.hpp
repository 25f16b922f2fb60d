#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "enumerate.hpp"
#include "singular.hpp"

namespace qfc {

// Largest t >= 0 with t^k <= x.
inline i64 iroot(i128 x, int k) {
    if (x < 0) fail(ErrorKind::InvalidArgument, "iroot of negative");
    if (k == 1) return static_cast<i64>(x);
    auto pow_le = [&](i128 t) {
        i128 r = 1;
        for (int i = 0; i < k; ++i) {
            r *= t;
            if (r > x) return false;
        }
        return true;
    };
    i128 t = static_cast<i128>(std::pow(static_cast<long double>(x), 1.0L / k));
    while (t > 0 && !pow_le(t)) --t;
    while (pow_le(t + 1)) ++t;
    return static_cast<i64>(t);
}

namespace detail {

// a0[n] = least a >= 1 with a n a cube.
inline std::vector<i64> cube_complements(i64 N) {
    std::vector<i64> spf(static_cast<size_t>(N) + 1, 0), a0(static_cast<size_t>(N) + 1, 1);
    for (i64 i = 2; i <= N; ++i)
        if (!spf[i])
            for (i64 j = i; j <= N; j += i)
                if (!spf[j]) spf[j] = i;
    for (i64 n = 2; n <= N; ++n) {
        i64 t = n, a = 1;
        while (t > 1) {
            i64 p = spf[t];
            int e = 0;
            while (t % p == 0) {
                t /= p;
                ++e;
            }
            for (int i = 0; i < (3 - e % 3) % 3; ++i) {
                a *= p;
                if (a > N * N) a = N * N + 1; // only compared against x_max <= N
            }
        }
        a0[n] = a;
    }
    return a0;
}

} // namespace detail

// 2 * sum_{a <= x_max} sum_{n <= q_max} 1_3(a n) r(n), i.e. the integral points with
// 1 <= |x| , |z| <= x_max-type box and 1 <= Q(y) <= q_max.
inline i64 n_star(const RepTable& t, i64 x_max, i64 q_max) {
    if (x_max < 1 || q_max < 1) return 0;
    if (q_max > t.N) fail(ErrorKind::InvalidArgument, "n_star: table too short");
    auto a0 = detail::cube_complements(q_max);
    i64 s = 0;
    for (i64 n = 1; n <= q_max; ++n) {
        if (!t.counts[n] || a0[n] > x_max) continue;
        i64 term;
        if (__builtin_mul_overflow(t.counts[n], static_cast<i64>(icbrt(static_cast<u64>(x_max / a0[n]))), &term) ||
            __builtin_add_overflow(s, term, &s))
            fail(ErrorKind::ResourceLimit, "n_star exceeds 64 bits");
    }
    if (s > INT64_MAX / 2) fail(ErrorKind::ResourceLimit, "n_star exceeds 64 bits");
    return 2 * s;
}

inline i64 n_star(const QuadraticForm& q, i64 B, int threads = 1) {
    if (B < 1) return 0;
    return n_star(rep_table(q, B * B, threads), B, B * B);
}

// N*(b) for every b <= B from one enumeration in reversed coordinate order;
// profile[b] counts points with affine height <= b.
inline std::vector<i64> n_star_direct_profile(const QuadraticForm& q, i64 B) {
    std::vector<i64> prof(static_cast<size_t>(std::max<i64>(B, 0)) + 1, 0);
    if (B < 1) return prof;
    if (detail::ellipsoid_volume(q.m(), q.invariants().det_A.get_d(), static_cast<double>(B) * B) > 4e9)
        fail(ErrorKind::ResourceLimit, "enumeration over budget");
    auto a0 = detail::cube_complements(B * B);
    // n z is a cube exactly when z = a0(n) t^3
    enumerate_ellipsoid(q, B * B, [&](const std::vector<i64>&, i64 n) {
        if (n == 0 || a0[n] > B) return;
        i64 h0 = static_cast<i64>(isqrt(static_cast<u64>(n)));
        if (h0 * h0 < n) ++h0;
        for (i64 t = 1;; ++t) {
            i64 z = a0[n] * t * t * t;
            if (z > B) break;
            i64 x = static_cast<i64>(icbrt(static_cast<u64>(n * z)));
            prof[std::max({x, h0, z})] += 2; // (x, y, z) and (-x, y, -z)
        }
    }, true);
    for (size_t b = 1; b < prof.size(); ++b) prof[b] += prof[b - 1];
    return prof;
}

inline i64 n_star_direct(const QuadraticForm& q, i64 B) {
    if (B < 1) return 0;
    return n_star_direct_profile(q, B).back();
}

// Moebius inversion over the projective height B = T^(m-1).
inline i64 n_rational(const QuadraticForm& q, i64 B, int threads = 1) {
    if (B < 1) return 0;
    const int e = q.m() - 1;
    const i64 T = iroot(B, e);
    const i64 R = iroot(static_cast<i128>(B) * B, e); // largest n with n^(m-1) <= B^2
    if (T < 1) return 0;
    RepTable t = rep_table(q, R, threads);
    i64 s = 0;
    for (i64 d = 1; d <= T; ++d) {
        int mu = mobius(d);
        if (mu) s += mu * n_star(t, T / d, R / (d * d));
    }
    return s;
}

// Primitive (x, y, z) with H <= B, x z != 0, one representative per sign pair.
inline i64 n_projective(const QuadraticForm& q, i64 B) {
    if (B < 1) return 0;
    const int e = q.m() - 1;
    const i64 T = iroot(B, e);
    const i64 R = iroot(static_cast<i128>(B) * B, e);
    if (T < 1) return 0;
    if (detail::ellipsoid_volume(q.m(), q.invariants().det_A.get_d(), static_cast<double>(R)) > 4e9)
        fail(ErrorKind::ResourceLimit, "enumeration over budget");
    auto a0 = detail::cube_complements(R);
    i64 count = 0;
    // n z is a cube exactly when z = a0(n) t^3
    enumerate_ellipsoid(q, R, [&](const std::vector<i64>& y, i64 n) {
        if (n == 0 || a0[n] > T) return;
        i64 g = 0;
        for (i64 v : y) g = std::gcd(g, abs64(v));
        for (i64 t = 1;; ++t) {
            i64 z = a0[n] * t * t * t;
            if (z > T) break;
            i64 x = static_cast<i64>(icbrt(static_cast<u64>(n * z)));
            if (x > T) break;
            if (std::gcd(std::gcd(g, x), z) == 1) ++count;
        }
    });
    return count;
}

struct SeriesSum {
    Rational exact; // for S_Q: the sum with 1/L(k, chi) factored out
    BoundedNumeric value;
};

inline SeriesSum s_w_sum(const QuadraticForm& q, i64 x, i64 y) {
    if (x < 1 || y < 1) fail(ErrorKind::InvalidArgument, "s_w_sum: x, y must be positive");
    auto a0 = detail::cube_complements(y);
    const int k = q.k();
    Rational s = 0;
    for (i64 n = 1; n <= y; ++n) {
        if (a0[n] > x) continue;
        i64 c = static_cast<i64>(icbrt(static_cast<u64>(x / a0[n])));
        BigInt nk;
        mpz_ui_pow_ui(nk.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k - 1));
        s += Rational(nk * c) * sigma_chi(n, k, q.four_d());
    }
    s.canonicalize();
    double v = s.get_d();
    return {s, {v, detail::rounding(v)}};
}

inline SeriesSum s_q_sum(SingularSeries& S, i64 x, i64 y) {
    if (x < 1 || y < 1) fail(ErrorKind::InvalidArgument, "s_q_sum: x, y must be positive");
    auto a0 = detail::cube_complements(y);
    const int k = S.form().k();
    Rational s = 0;
    for (i64 n = 1; n <= y; ++n) {
        if (a0[n] > x) continue;
        i64 c = static_cast<i64>(icbrt(static_cast<u64>(x / a0[n])));
        BigInt nk;
        mpz_ui_pow_ui(nk.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k - 1));
        s += Rational(nk * c) * S.rational_part(n);
    }
    s.canonicalize();
    double v = s.get_d();
    return {s, BoundedNumeric(v, detail::rounding(v)) / S.l_value()};
}

inline SeriesSum s_q_sum(const QuadraticForm& q, i64 x, i64 y) {
    SingularSeries S(q);
    return s_q_sum(S, x, y);
}

struct LeadingFit {
    double c2 = 0, c1 = 0, c0 = 0;
    double residual = 0; // Euclidean norm of the residual of N / B^(m-1)
};

// Least squares of N / B^(m-1) against c2 L^2 + c1 L + c0, L = log B.
inline LeadingFit fit_leading(const std::vector<double>& B, const std::vector<double>& N, int m) {
    if (B.size() != N.size()) fail(ErrorKind::InvalidArgument, "fit_leading: size mismatch");
    if (B.size() < 6) fail(ErrorKind::InvalidArgument, "fit_leading: needs at least 6 points");
    for (size_t i = 0; i < B.size(); ++i) {
        if (!(B[i] > 1)) fail(ErrorKind::InvalidArgument, "fit_leading: B must exceed 1");
        if (i && !(B[i] > B[i - 1])) fail(ErrorKind::InvalidArgument, "fit_leading: B must be increasing");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(B.size());
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd Y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double L = std::log(B[i]);
        X(i, 0) = L * L;
        X(i, 1) = L;
        X(i, 2) = 1;
        Y(i) = N[i] / std::pow(B[i], m - 1);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-12);
    if (qr.rank() < 3) fail(ErrorKind::DegenerateDesign, "fit_leading: design matrix is rank deficient");
    Eigen::VectorXd c = qr.solve(Y);
    return {c(0), c(1), c(2), (X * c - Y).norm()};
}

struct CountReport {
    i64 B = 0;                         // affine height; the projective height is B^(m-1)
    i64 n_star = 0;
    std::optional<i64> n_star_direct;
    i64 n_rational = 0;
    i64 n_projective = 0;
    bool consistent = true;
};

inline CountReport count_report(const QuadraticForm& q, i64 B, bool direct, int threads = 1) {
    CountReport r;
    r.B = B;
    r.n_star = n_star(q, B, threads);
    if (direct) r.n_star_direct = n_star_direct(q, B);
    i64 Bp = ipow(B, q.m() - 1);
    r.n_rational = n_rational(q, Bp, threads);
    r.n_projective = n_projective(q, Bp);
    r.consistent = (!r.n_star_direct || *r.n_star_direct == r.n_star) && r.n_rational == 2 * r.n_projective;
    return r;
}

} // namespace qfc
