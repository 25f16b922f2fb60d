#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "error.hpp"

namespace qfc {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using Rational = mpq_class;
using BigInt = mpz_class;

inline i64 abs64(i64 x) { return x < 0 ? -x : x; }

inline i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) { return static_cast<i64>(static_cast<i128>(a) * b % m); }

inline i64 powmod(i64 b, u64 e, i64 m) {
    i64 r = 1 % m;
    b = mod(b, m);
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

// Inverse of a modulo m, a coprime to m.
inline i64 invmod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, a1 = mod(a, m);
    while (a1) {
        i64 q = g / a1;
        i64 t = g - q * a1; g = a1; a1 = t;
        t = x - q * x1; x = x1; x1 = t;
    }
    if (g != 1) fail(ErrorKind::InvalidArgument, "invmod: not a unit");
    return mod(x, m);
}

// Checked integer power; throws on overflow of 63 bits.
inline i64 ipow(i64 b, int e) {
    i128 r = 1;
    for (int i = 0; i < e; ++i) {
        r *= b;
        if (r > INT64_MAX || r < INT64_MIN) fail(ErrorKind::ResourceLimit, "ipow overflow");
    }
    return static_cast<i64>(r);
}

inline u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline i128 isqrt128(i128 n) {
    if (n < 0) fail(ErrorKind::InvalidArgument, "isqrt of negative");
    i128 r = static_cast<i128>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline u64 icbrt(u64 n) {
    u64 r = static_cast<u64>(std::cbrt(static_cast<long double>(n)));
    while (r > 0 && r * r * r > n) --r;
    while ((r + 1) * (r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Jacobi symbol (a/q) for odd q >= 1; a is reduced mod q first, which is the
// Kronecker extension for negative a.
inline int jacobi(i64 a, i64 q) {
    if (q <= 0 || (q & 1) == 0) fail(ErrorKind::InvalidArgument, "jacobi: q must be odd and positive");
    a = mod(a, q);
    int t = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            i64 r = q & 7;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, q);
        if ((a & 3) == 3 && (q & 3) == 3) t = -t;
        a %= q;
    }
    return q == 1 ? t : 0;
}

struct ValuationSplit {
    int nu = 0;
    i64 unit_part = 1;
};

inline ValuationSplit valuation(i64 n, i64 p) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "valuation of 0");
    if (p < 2) fail(ErrorKind::InvalidArgument, "valuation: bad prime");
    ValuationSplit s;
    n = abs64(n);
    while (n % p == 0) {
        n /= p;
        ++s.nu;
    }
    s.unit_part = n;
    return s;
}

inline int valuation(const BigInt& n, i64 p) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "valuation of 0");
    BigInt t = abs(n);
    BigInt pp = static_cast<unsigned long>(p);
    int v = 0;
    while (mpz_divisible_p(t.get_mpz_t(), pp.get_mpz_t())) {
        t /= pp;
        ++v;
    }
    return v;
}

inline int cube_indicator(i64 n) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "cube_indicator: n must be positive");
    u64 c = icbrt(static_cast<u64>(n));
    return c * c * c == static_cast<u64>(n) ? 1 : 0;
}

inline std::vector<std::pair<i64, int>> factorize(i64 n) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "factorize: n must be positive");
    std::vector<std::pair<i64, int>> f;
    for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

inline std::vector<i64> prime_divisors(const BigInt& n) {
    std::vector<i64> ps;
    BigInt t = abs(n);
    for (unsigned long p = 2; BigInt(p) * p <= t; p += (p == 2 ? 1 : 2)) {
        if (!mpz_divisible_ui_p(t.get_mpz_t(), p)) continue;
        ps.push_back(static_cast<i64>(p));
        while (mpz_divisible_ui_p(t.get_mpz_t(), p)) t /= p;
    }
    if (t > 1) {
        if (!t.fits_slong_p()) fail(ErrorKind::ResourceLimit, "prime divisor too large");
        ps.push_back(t.get_si());
    }
    return ps;
}

inline int mobius(i64 n) {
    int s = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        s = -s;
    }
    return s;
}

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

inline std::vector<i64> primes_upto(i64 n) {
    std::vector<i64> ps;
    if (n < 2) return ps;
    std::vector<bool> comp(static_cast<size_t>(n) + 1, false);
    for (i64 i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        ps.push_back(i);
        for (i64 j = i * i; j <= n; j += i) comp[j] = true;
    }
    return ps;
}

inline std::vector<int> mobius_table(i64 n) {
    std::vector<int> mu(static_cast<size_t>(n) + 1, 1);
    if (n >= 0) mu[0] = 0;
    std::vector<bool> comp(static_cast<size_t>(n) + 1, false);
    for (i64 p = 2; p <= n; ++p) {
        if (comp[p]) continue;
        for (i64 j = p; j <= n; j += p) {
            if (j > p) comp[j] = true;
            mu[j] = -mu[j];
        }
        if (p <= n / p)
            for (i64 j = p * p; j <= n; j += p * p) mu[j] = 0;
    }
    return mu;
}

// Smallest a0 >= 1 with a0*n a cube; a*n is a cube iff a = a0*t^3.
inline i64 cube_complement(i64 n) {
    i64 a0 = 1;
    for (auto [p, e] : factorize(n)) a0 *= ipow(p, (3 - e % 3) % 3);
    return a0;
}

// The real character q -> (4D/q), zero on q sharing a factor with 2D.
class Character {
public:
    Character() = default;
    explicit Character(i64 four_d) : four_d_(four_d) {
        if (four_d == 0 || four_d % 4 != 0) fail(ErrorKind::InvalidArgument, "character modulus must be 4D");
    }

    i64 modulus() const { return four_d_; }

    int operator()(i64 q) const {
        if (q <= 0) fail(ErrorKind::InvalidArgument, "character argument must be positive");
        if ((q & 1) == 0 || std::gcd(q, abs64(four_d_)) != 1) return 0;
        return jacobi(four_d_, q);
    }

    // True when chi agrees with the principal character mod 2D.
    bool principal() const {
        i64 a = abs64(four_d_);
        if (four_d_ < 0) return false;
        u64 r = isqrt(static_cast<u64>(a));
        return static_cast<i64>(r * r) == a;
    }

private:
    i64 four_d_ = 4;
};

inline Rational sigma_chi(i64 n, int k, i64 modulus) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "sigma_chi: n must be positive");
    if (k < 2) fail(ErrorKind::InvalidArgument, "sigma_chi: k must be >= 2");
    Character chi(modulus);
    Rational s = 0;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        for (i64 e : {d, n / d}) {
            int c = chi(e);
            if (c != 0) {
                BigInt den;
                mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(k - 1));
                s += Rational(BigInt(c), den);
            }
            if (e == n / e) break;
        }
    }
    s.canonicalize();
    return s;
}

} // namespace qfc
