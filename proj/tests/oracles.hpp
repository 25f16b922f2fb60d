#pragma once

// Slow reference computations used only by the tests. They share nothing with
// the library beyond the QuadraticForm container.

#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "qfcount/qform.hpp"

namespace oracle {

using qfc::i64;
using qfc::QuadraticForm;
using qfc::Rational;

inline i64 value(const QuadraticForm& q, const std::vector<i64>& y) {
    i64 s = 0;
    for (int i = 0; i < q.m(); ++i)
        for (int j = 0; j < q.m(); ++j) s += q.a(i, j) * y[i] * y[j];
    return s / 2;
}

template <class F>
void odometer(int m, i64 base, F&& f) {
    std::vector<i64> y(m, 0);
    while (true) {
        f(y);
        int i = 0;
        while (i < m && ++y[i] == base) y[i++] = 0;
        if (i == m) return;
    }
}

inline i64 ppow(i64 p, int e) {
    i64 r = 1;
    while (e--) r *= p;
    return r;
}

// #{y mod p^nu : Q(y) = n} / p^(nu (m-1)) by plain enumeration.
inline Rational count_density(const QuadraticForm& q, i64 p, i64 n, int nu) {
    const i64 P = ppow(p, nu);
    i64 hits = 0;
    odometer(q.m(), P, [&](const std::vector<i64>& y) {
        if (((value(q, y) - n) % P + P) % P == 0) ++hits;
    });
    Rational d(hits);
    for (int i = 0; i < nu * (q.m() - 1); ++i) d /= p;
    d.canonicalize();
    return d;
}

// The count density at nu_max, provided it is the same at the two levels below;
// nullopt when it has not settled.
inline std::optional<Rational> settled_density(const QuadraticForm& q, i64 p, i64 n, int nu_max) {
    Rational top = count_density(q, p, n, nu_max);
    for (int nu = nu_max - 2; nu < nu_max; ++nu)
        if (count_density(q, p, n, nu) != top) return std::nullopt;
    return top;
}

// r_Q(n) for n <= N by a box search; the caller picks a radius that contains
// the ellipsoid Q <= N.
inline std::vector<i64> rep_counts(const QuadraticForm& q, i64 N, i64 radius) {
    std::vector<i64> r(static_cast<size_t>(N) + 1, 0);
    const int m = q.m();
    std::vector<i64> y(m, -radius);
    while (true) {
        i64 v = value(q, y);
        if (v <= N) ++r[v];
        int i = 0;
        while (i < m && ++y[i] > radius) y[i++] = -radius;
        if (i == m) break;
    }
    return r;
}

inline std::complex<double> gauss_sum(const QuadraticForm& q, i64 c, i64 d, const std::vector<i64>& u) {
    std::complex<double> s = 0;
    odometer(q.m(), c, [&](const std::vector<i64>& h) {
        i64 t = value(q, h);
        for (int i = 0; i < q.m(); ++i) t += h[i] * u[i];
        i64 e = ((d * (t % c)) % c + c) % c;
        s += std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(c));
    });
    return s;
}

inline i64 sigma(i64 n, int k) {
    i64 s = 0;
    for (i64 d = 1; d <= n; ++d)
        if (n % d == 0) s += ppow(d, k);
    return s;
}

} // namespace oracle
