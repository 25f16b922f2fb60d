#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include "density.hpp"
#include "lfunc.hpp"

namespace qfc {

struct SingularSeriesValue {
    Rational rational_part; // sigma_{1-k}(n, chi) * varpi(n)
    BoundedNumeric l_value; // L(k, chi)
    BoundedNumeric value;
};

// The singular series through its closed form, caching local data for repeated n.
class SingularSeries {
public:
    explicit SingularSeries(const QuadraticForm& q) : q_(q), local_(q), l_(l_chi(q.k(), q)) {}

    const QuadraticForm& form() const { return q_; }
    LocalDensities& local() { return local_; }
    const BoundedNumeric& l_value() const { return l_; }

    Rational rational_part(i64 n) {
        if (n < 1) fail(ErrorKind::InvalidArgument, "singular series: n must be positive");
        Rational r = sigma_chi(n, q_.k(), q_.four_d()) * local_.varpi(n);
        r.canonicalize();
        return r;
    }

    SingularSeriesValue operator()(i64 n) {
        SingularSeriesValue v;
        v.rational_part = rational_part(n);
        v.l_value = l_;
        double rp = v.rational_part.get_d();
        v.value = BoundedNumeric(rp, detail::rounding(rp)) / l_;
        return v;
    }

private:
    QuadraticForm q_;
    LocalDensities local_;
    BoundedNumeric l_;
};

inline SingularSeriesValue singular_series(const QuadraticForm& q, i64 n) { return SingularSeries(q)(n); }

namespace detail {

// hist[t] = #{h mod c : Q(h) = t mod c}
inline std::vector<i64> value_histogram(const QuadraticForm& q, i64 c) {
    const int m = q.m();
    std::vector<i64> hist(static_cast<size_t>(c), 0);
    std::vector<i64> h(m, 0);
    // lin[i] = sum_{j<i} a_ij h_j mod c, acc[i] = Q restricted to the first i coordinates mod c
    std::vector<i64> acc(m + 1, 0);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == m) {
            ++hist[acc[m]];
            return;
        }
        i64 lin = 0;
        for (int j = 0; j < i; ++j) lin += mod(q.a(i, j), c) * h[j] % c;
        lin %= c;
        const i64 qii = mod(q.a(i, i) / 2, c);
        for (i64 x = 0; x < c; ++x) {
            h[i] = x;
            acc[i + 1] = (acc[i] + (qii * x % c) * x + lin * x) % c;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return hist;
}

inline i64 ramanujan_sum(i64 c, i64 x) {
    i64 g = std::gcd(c, abs64(x));
    i64 s = 0;
    for (i64 e = 1; e <= g; ++e)
        if (g % e == 0) s += mobius(c / e) * e;
    return s;
}

} // namespace detail

struct CsumReport {
    i64 n = 0;
    int C = 0;
    Rational value;                             // partial sum over c <= C
    std::vector<Rational> partial;              // partial[c-1] = sum over moduli <= c
    std::vector<std::pair<int, double>> trend;  // partial sums at C/4, C/2, C
};

// Partial sums of the defining c-series for several n at once, sharing the
// per-modulus value histograms.
inline std::vector<CsumReport> singular_series_csum(const QuadraticForm& q, const std::vector<i64>& ns, int C,
                                                    double budget = -1) {
    if (C < 1) fail(ErrorKind::InvalidArgument, "csum: cutoff must be positive");
    const int m = q.m();
    double cost = 0;
    for (int c = 1; c <= C; ++c) cost += std::pow(static_cast<double>(c), m);
    if (budget < 0) {
        if (m != 4) fail(ErrorKind::ResourceLimit, "csum: m > 4 needs an explicit budget");
        budget = 1e8;
    }
    if (cost > budget) fail(ErrorKind::ResourceLimit, "csum: sum of c^m over budget");
    std::vector<CsumReport> out(ns.size());
    for (size_t i = 0; i < ns.size(); ++i) {
        if (ns[i] < 1) fail(ErrorKind::InvalidArgument, "csum: n must be positive");
        out[i].n = ns[i];
        out[i].C = C;
        out[i].value = 0;
    }
    for (int c = 1; c <= C; ++c) {
        auto hist = detail::value_histogram(q, c);
        std::vector<i64> ram(static_cast<size_t>(c));
        for (i64 x = 0; x < c; ++x) ram[x] = detail::ramanujan_sum(c, x);
        BigInt cm;
        mpz_ui_pow_ui(cm.get_mpz_t(), static_cast<unsigned long>(c), static_cast<unsigned long>(m));
        for (auto& r : out) {
            i128 num = 0;
            for (i64 t = 0; t < c; ++t)
                if (hist[t]) num += static_cast<i128>(hist[t]) * ram[mod(t - r.n, c)];
            r.value += Rational(BigInt(static_cast<long>(num)), cm);
            r.value.canonicalize();
            r.partial.push_back(r.value);
        }
    }
    for (auto& r : out)
        for (int c : {C / 4, C / 2, C})
            if (c >= 1) r.trend.emplace_back(c, r.partial[c - 1].get_d());
    return out;
}

inline CsumReport singular_series_csum(const QuadraticForm& q, i64 n, int C, double budget = -1) {
    return singular_series_csum(q, std::vector<i64>{n}, C, budget).front();
}

// A complex number with a bound on its distance to the true value.
struct BoundedComplex {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
};

inline BoundedComplex operator*(const BoundedComplex& a, const BoundedComplex& b) {
    BoundedComplex r;
    r.value = a.value * b.value;
    r.error = std::abs(a.value) * b.error + std::abs(b.value) * a.error + a.error * b.error +
              8 * std::numeric_limits<double>::epsilon() * std::abs(r.value);
    return r;
}

struct GaussSum {
    i64 c = 1;
    i64 d = 1;
    std::vector<i64> u;
    BoundedComplex value;
    double bound = 0; // (c m ||Q||)^(m/2)
};

// G_u(d/c) = sum_{h mod c} e(d (Q(h) + h.u) / c). Moduli are split by CRT; on
// each prime power Q is brought to Jordan form so the sum factors over blocks.
class GaussSums {
public:
    explicit GaussSums(const QuadraticForm& q) : q_(q) {}

    GaussSum operator()(i64 c, i64 d, const std::vector<i64>& u) {
        const int m = q_.m();
        if (c < 1) fail(ErrorKind::InvalidArgument, "gauss_sum: c must be positive");
        if (std::gcd(c, abs64(d)) != 1) fail(ErrorKind::InvalidArgument, "gauss_sum: gcd(c, d) must be 1");
        if (static_cast<int>(u.size()) != m) fail(ErrorKind::InvalidArgument, "gauss_sum: u must have length m");
        GaussSum g;
        g.c = c;
        g.d = d;
        g.u = u;
        g.value.value = 1.0;
        for (auto [p, e] : factorize(c)) {
            i64 qe = ipow(p, e);
            i64 rest = c / qe;
            i64 dd = mulmod(mod(d, qe), invmod(mod(rest, qe), qe), qe);
            g.value = g.value * prime_power(p, e, dd, u);
        }
        g.bound = std::pow(static_cast<double>(c) * m * static_cast<double>(q_.invariants().norm), m / 2.0);
        return g;
    }

private:
    struct Split {
        std::vector<QBlock> blocks;
        std::vector<i64> U;
    };

    const Split& split(i64 p, int e) {
        auto key = std::make_pair(p, e);
        auto it = splits_.find(key);
        if (it != splits_.end()) return it->second;
        Split s;
        int K = std::max(default_precision(q_, p), e);
        if (p == 2) {
            auto J = jordan_two(q_, K);
            if (!verify_equivalence(q_, J)) fail(ErrorKind::PrecisionTooLow, "Jordan verification failed");
            s.blocks = q_blocks(J);
            s.U = J.U;
        } else {
            auto J = jordan_odd(q_, p, K);
            if (!verify_equivalence(q_, J)) fail(ErrorKind::PrecisionTooLow, "Jordan verification failed");
            s.blocks = q_blocks(J);
            s.U = J.U;
        }
        return splits_.emplace(key, std::move(s)).first->second;
    }

    BoundedComplex prime_power(i64 p, int e, i64 d, const std::vector<i64>& u) {
        const int m = q_.m();
        const i64 Q = ipow(p, e);
        const Split& s = split(p, e);
        // h = U h', so h.u = h'.(U^T u)
        std::vector<i64> v(m, 0);
        for (int h = 0; h < m; ++h) {
            i64 acc = 0;
            for (int i = 0; i < m; ++i) acc = (acc + mulmod(mod(s.U[i * m + h], Q), mod(u[i], Q), Q)) % Q;
            v[h] = acc;
        }
        BoundedComplex total;
        total.value = 1.0;
        int col = 0;
        std::vector<i64> hist(static_cast<size_t>(Q));
        for (const auto& b : s.blocks) {
            std::fill(hist.begin(), hist.end(), 0);
            i64 a11 = mod(b.q11, Q), a12 = mod(b.q12, Q), a22 = mod(b.q22, Q);
            i64 terms = 0;
            if (b.dim == 1) {
                for (i64 x = 0; x < Q; ++x) ++hist[(mulmod(a11, x * x % Q, Q) + v[col] * x) % Q];
                terms = Q;
            } else {
                for (i64 x = 0; x < Q; ++x)
                    for (i64 y = 0; y < Q; ++y) {
                        i64 t = (mulmod(a11, x * x % Q, Q) + mulmod(a12, x * y % Q, Q) + mulmod(a22, y * y % Q, Q) +
                                 v[col] * x + v[col + 1] * y) % Q;
                        ++hist[t];
                    }
                terms = Q * Q;
            }
            col += b.dim;
            BoundedComplex bs;
            for (i64 t = 0; t < Q; ++t)
                if (hist[t]) {
                    double ang = 2.0 * std::numbers::pi * static_cast<double>(mulmod(d, t, Q)) / static_cast<double>(Q);
                    bs.value += static_cast<double>(hist[t]) * std::complex<double>(std::cos(ang), std::sin(ang));
                }
            bs.error = 4.0 * static_cast<double>(terms) * std::numeric_limits<double>::epsilon();
            total = total * bs;
        }
        return total;
    }

    QuadraticForm q_;
    std::map<std::pair<i64, int>, Split> splits_;
};

inline GaussSum gauss_sum(const QuadraticForm& q, i64 c, i64 d, const std::vector<i64>& u) { return GaussSums(q)(c, d, u); }

// Uses the upper end of the enclosure, so rounding never produces a false pass.
inline bool gauss_bound_holds(const GaussSum& g) { return std::abs(g.value.value) + g.value.error <= g.bound; }

inline bool gauss_bound_holds(const QuadraticForm& q, i64 c, i64 d, const std::vector<i64>& u) {
    return gauss_bound_holds(gauss_sum(q, c, d, u));
}

// Gamma(m/2) = (m/2 - 1)! for even m.
inline double gamma_half_m(int m) {
    double g = 1;
    for (int i = 2; i < m / 2; ++i) g *= i;
    return g;
}

inline BoundedNumeric main_term_factor(const QuadraticForm& q, i64 n) {
    const int m = q.m();
    double f = std::pow(2.0 * std::numbers::pi, m / 2.0) * std::pow(static_cast<double>(n), m / 2.0 - 1) /
               (gamma_half_m(m) * std::sqrt(q.invariants().det_A.get_d()));
    return {f, 16 * std::numeric_limits<double>::epsilon() * f};
}

inline BoundedNumeric r_main_term(SingularSeries& s, i64 n) { return main_term_factor(s.form(), n) * s(n).value; }

inline BoundedNumeric r_main_term(const QuadraticForm& q, i64 n) {
    SingularSeries s(q);
    return r_main_term(s, n);
}

} // namespace qfc
