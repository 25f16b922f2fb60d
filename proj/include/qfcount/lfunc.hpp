#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "arith.hpp"
#include "numeric.hpp"
#include "qform.hpp"

namespace qfc {

// Euler-Maclaurin with N = 20 and ten Bernoulli corrections; the remainder is
// bounded by twice the first omitted term.
inline BoundedNumeric zeta(double s) {
    if (!(s > 1.0)) fail(ErrorKind::Domain, "zeta: s must exceed 1");
    static const double B[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730,
                               7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330, 854513.0 / 138};
    const int N = 20, J = 10;
    long double sum = 0;
    for (int n = N - 1; n >= 1; --n) sum += std::pow(static_cast<long double>(n), -s);
    const long double Nl = N;
    sum += std::pow(Nl, 1 - s) / (s - 1) + std::pow(Nl, -s) / 2;
    long double poch = s; // s (s+1) ... (s+2j-2)
    long double fact = 2; // (2j)!
    long double tail = 0;
    for (int j = 1; j <= J + 1; ++j) {
        long double term = B[j - 1] / fact * poch * std::pow(Nl, -s - 2 * j + 1);
        if (j <= J)
            sum += term;
        else
            tail = std::fabs(term);
        poch *= (s + 2 * j - 1) * (s + 2 * j);
        fact *= (2 * j + 1) * (2 * j + 2);
    }
    double v = static_cast<double>(sum);
    return {v, 2.0 * static_cast<double>(tail) + 64 * std::numeric_limits<double>::epsilon() * v};
}

// L(s, chi) for the character (4D/.). Principal characters reduce to zeta with
// the Euler factors at p | 2D removed; otherwise a direct sum with the Abel
// tail bound |sum_{n>N}| <= q N^-s, q = |4D|.
inline BoundedNumeric l_chi(double s, const Character& chi, double tol = 1e-13) {
    if (!(s > 1.0)) fail(ErrorKind::Domain, "l_chi: s must exceed 1");
    const i64 q = abs64(chi.modulus());
    if (chi.principal()) {
        BoundedNumeric z = zeta(s);
        for (i64 p : prime_divisors(BigInt(q))) z *= BoundedNumeric(1.0 - std::pow(static_cast<double>(p), -s), 1e-16);
        return z;
    }
    std::vector<signed char> table(static_cast<size_t>(q));
    for (i64 r = 1; r < q; ++r) table[r] = static_cast<signed char>(chi(r));
    double Nd = std::ceil(std::pow(static_cast<double>(q) / tol, 1.0 / s));
    if (Nd > 4e8) fail(ErrorKind::ResourceLimit, "l_chi: direct sum length over budget");
    const i64 N = static_cast<i64>(Nd);
    long double sum = 0;
    for (i64 n = N; n >= 1; --n) {
        int c = table[n % q];
        if (c) sum += c * std::pow(static_cast<long double>(n), -s);
    }
    double v = static_cast<double>(sum);
    double round = static_cast<double>(N) * std::numeric_limits<long double>::epsilon() * 2.0 + 4 * std::numeric_limits<double>::epsilon() * std::fabs(v);
    return {v, static_cast<double>(q) * std::pow(Nd, -s) + round};
}

inline BoundedNumeric l_chi(double s, const QuadraticForm& q, double tol = 1e-13) { return l_chi(s, q.chi(), tol); }

} // namespace qfc
