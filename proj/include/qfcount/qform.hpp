#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "arith.hpp"
#include "exact.hpp"

namespace qfc {

struct Coefficient {
    int i = 1;
    int j = 1;
    i64 c = 0;
};

struct FormInvariants {
    BigInt det_A;
    BigInt D;
    i64 norm = 0;
    i64 level = 0;
    i64 lambda_bound = 0;
};

namespace detail {

// Fraction-free elimination without pivoting; the k-th pivot is the k-th
// leading principal minor. Returns all leading minors.
inline std::vector<BigInt> leading_minors(const std::vector<i64>& a, int m) {
    std::vector<BigInt> w(a.begin(), a.end());
    std::vector<BigInt> minors;
    BigInt prev = 1;
    for (int k = 0; k < m; ++k) {
        BigInt piv = w[k * m + k];
        minors.push_back(piv);
        if (piv == 0) {
            for (int r = k + 1; r < m; ++r) minors.push_back(0);
            break;
        }
        for (int i = k + 1; i < m; ++i)
            for (int j = k + 1; j < m; ++j) {
                BigInt t = piv * w[i * m + j] - w[i * m + k] * w[k * m + j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                w[i * m + j] = t;
            }
        prev = piv;
    }
    return minors;
}

} // namespace detail

inline BigInt det_bareiss(const std::vector<i64>& a, int m) {
    std::vector<BigInt> w(a.begin(), a.end());
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < m; ++k) {
        int piv = -1;
        for (int r = k; r < m; ++r)
            if (w[r * m + k] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != k) {
            for (int j = 0; j < m; ++j) std::swap(w[k * m + j], w[piv * m + j]);
            sign = -sign;
        }
        for (int i = k + 1; i < m; ++i)
            for (int j = k + 1; j < m; ++j) {
                BigInt t = w[k * m + k] * w[i * m + j] - w[i * m + k] * w[k * m + j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                w[i * m + j] = t;
            }
        prev = w[k * m + k];
    }
    return sign * prev;
}

// Laplace expansion along the first row; used as a cross-check for small m.
inline BigInt det_cofactor(const std::vector<i64>& a, int m) {
    if (m == 1) return a[0];
    BigInt s = 0;
    for (int c = 0; c < m; ++c) {
        std::vector<i64> minor;
        for (int i = 1; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (j != c) minor.push_back(a[i * m + j]);
        BigInt t = a[c] * det_cofactor(minor, m - 1);
        s += (c % 2 == 0) ? t : BigInt(-t);
    }
    return s;
}

inline std::vector<Rational> inverse_exact(const std::vector<i64>& a, int m) {
    std::vector<Rational> w(static_cast<size_t>(m) * 2 * m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) w[i * 2 * m + j] = Rational(static_cast<long>(a[i * m + j]));
        w[i * 2 * m + m + i] = 1;
    }
    for (int k = 0; k < m; ++k) {
        int piv = k;
        while (piv < m && w[piv * 2 * m + k] == 0) ++piv;
        if (piv == m) fail(ErrorKind::InvalidArgument, "singular matrix");
        if (piv != k)
            for (int j = 0; j < 2 * m; ++j) std::swap(w[k * 2 * m + j], w[piv * 2 * m + j]);
        Rational inv = 1 / w[k * 2 * m + k];
        for (int j = 0; j < 2 * m; ++j) w[k * 2 * m + j] *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == k || w[i * 2 * m + k] == 0) continue;
            Rational f = w[i * 2 * m + k];
            for (int j = 0; j < 2 * m; ++j) w[i * 2 * m + j] -= f * w[k * 2 * m + j];
        }
    }
    std::vector<Rational> inv(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) inv[i * m + j] = w[i * 2 * m + m + j];
    return inv;
}

// Q(y) = y^T A y / 2 with A symmetric, integral, even diagonal.
class QuadraticForm {
public:
    int m() const { return m_; }
    int k() const { return m_ / 2; }
    i64 a(int i, int j) const { return a_[static_cast<size_t>(i) * m_ + j]; }
    const std::vector<i64>& matrix() const { return a_; }
    Rational gram(int i, int j) const { return Rational(static_cast<long>(a(i, j)), 2); }
    const FormInvariants& invariants() const { return inv_; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    // The modulus 4D of the character chi.
    i64 four_d() const {
        BigInt t = 4 * inv_.D;
        if (!t.fits_slong_p()) fail(ErrorKind::ResourceLimit, "discriminant exceeds 64 bits");
        return t.get_si();
    }
    Character chi() const { return Character(four_d()); }

    std::vector<Coefficient> coefficients() const {
        std::vector<Coefficient> cs;
        for (int i = 0; i < m_; ++i)
            for (int j = i; j < m_; ++j) {
                i64 c = (i == j) ? a(i, i) / 2 : a(i, j);
                if (c != 0) cs.push_back({i + 1, j + 1, c});
            }
        return cs;
    }

    friend QuadraticForm build_form(int m, const std::vector<Coefficient>& coefficients, std::string name);

private:
    int m_ = 0;
    std::vector<i64> a_;
    FormInvariants inv_;
    std::string name_;
};

inline FormInvariants compute_invariants(const std::vector<i64>& a, int m) {
    FormInvariants inv;
    inv.det_A = det_bareiss(a, m);
    inv.D = ((m / 2) % 2 == 0) ? inv.det_A : BigInt(-inv.det_A);
    for (i64 x : a) inv.norm = std::max(inv.norm, abs64(x));
    std::vector<Rational> ai = inverse_exact(a, m);
    BigInt lev = 1;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Rational x = (i == j) ? Rational(ai[i * m + j] / 2) : ai[i * m + j];
            x.canonicalize();
            mpz_lcm(lev.get_mpz_t(), lev.get_mpz_t(), x.get_den_mpz_t());
        }
    if (!lev.fits_slong_p()) fail(ErrorKind::ResourceLimit, "level exceeds 64 bits");
    inv.level = lev.get_si();
    inv.lambda_bound = m * inv.norm;
    return inv;
}

inline QuadraticForm build_form(int m, const std::vector<Coefficient>& coefficients, std::string name = "") {
    if (m % 2 != 0) fail(ErrorKind::Unsupported, "odd number of variables m=" + std::to_string(m));
    if (m < 4) fail(ErrorKind::Unsupported, "m must be at least 4");
    QuadraticForm q;
    q.m_ = m;
    q.name_ = std::move(name);
    q.a_.assign(static_cast<size_t>(m) * m, 0);
    std::vector<bool> seen(static_cast<size_t>(m) * m, false);
    i64 g = 0;
    for (const auto& c : coefficients) {
        if (c.i < 1 || c.j > m || c.i > c.j)
            fail(ErrorKind::InvalidArgument,
                 "coefficient index (" + std::to_string(c.i) + "," + std::to_string(c.j) + ") needs 1<=i<=j<=m");
        size_t idx = static_cast<size_t>(c.i - 1) * m + (c.j - 1);
        if (seen[idx])
            fail(ErrorKind::InvalidArgument,
                 "duplicate coefficient (" + std::to_string(c.i) + "," + std::to_string(c.j) + ")");
        seen[idx] = true;
        if (abs64(c.c) > (i64(1) << 40)) fail(ErrorKind::ResourceLimit, "coefficient too large");
        if (c.i == c.j) {
            q.a_[idx] = 2 * c.c;
        } else {
            q.a_[idx] = c.c;
            q.a_[static_cast<size_t>(c.j - 1) * m + (c.i - 1)] = c.c;
        }
        g = std::gcd(g, abs64(c.c));
    }
    auto minors = detail::leading_minors(q.a_, m);
    for (int i = 0; i < m; ++i)
        if (minors[i] <= 0)
            fail(ErrorKind::NotPositiveDefinite, "leading principal minor " + std::to_string(i + 1) + " is " +
                                                     minors[i].get_str());
    if (g != 1) fail(ErrorKind::NotPrimitive, "coefficients share the factor " + std::to_string(g));
    q.inv_ = compute_invariants(q.a_, m);
    return q;
}

inline const FormInvariants& invariants(const QuadraticForm& q) { return q.invariants(); }

inline i64 evaluate(const QuadraticForm& q, const std::vector<i64>& y) {
    const int m = q.m();
    if (static_cast<int>(y.size()) != m)
        fail(ErrorKind::InvalidArgument, "dimension mismatch: expected " + std::to_string(m));
    i128 s = 0;
    for (int i = 0; i < m; ++i) {
        s += static_cast<i128>(q.a(i, i) / 2) * y[i] * y[i];
        for (int j = i + 1; j < m; ++j) s += static_cast<i128>(q.a(i, j)) * y[i] * y[j];
    }
    if (s > INT64_MAX) fail(ErrorKind::ResourceLimit, "form value exceeds 64 bits");
    return static_cast<i64>(s);
}

} // namespace qfc
