#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exact.hpp"
#include "padic.hpp"
#include "qform.hpp"

namespace qfc {

// Reading of the exponent of delta_p in v_r for the odd-prime formula.
//   Calibrated: delta_p^(2[l/2]) = (-1/p)^[l/2]   (matches the enumeration oracle)
//   Literal:    delta_p^([l/2])
//   PerElement: delta_p^(l)
enum class VrConvention { Calibrated, Literal, PerElement };

inline const char* convention_name(VrConvention c) {
    switch (c) {
    case VrConvention::Calibrated: return "calibrated";
    case VrConvention::Literal: return "literal";
    case VrConvention::PerElement: return "per-element";
    }
    return "?";
}

inline std::vector<i64> bad_primes(const QuadraticForm& q) {
    std::vector<i64> ps = prime_divisors(2 * q.invariants().det_A);
    return ps;
}

inline bool is_bad_prime(const QuadraticForm& q, i64 p) {
    return p == 2 || mpz_divisible_ui_p(q.invariants().det_A.get_mpz_t(), static_cast<unsigned long>(p));
}

inline Rational delta_good(const QuadraticForm& q, i64 p, int nu) {
    if (!is_prime(p)) fail(ErrorKind::InvalidArgument, "delta_good: p must be prime");
    if (nu < 0) fail(ErrorKind::InvalidArgument, "delta_good: nu must be non-negative");
    if (is_bad_prime(q, p)) fail(ErrorKind::WrongBranch, "delta_good called with p | 2D");
    const int k = q.k();
    const int chi = q.chi()(p);
    Rational x = 1 - Rational(chi) * rational_pow(p, -k);
    Rational y = 1 - Rational(chi) * rational_pow(p, 1 - k);
    int chi_pow = (nu + 1) % 2 == 0 ? chi * chi : chi;
    Rational z = 1 - Rational(chi_pow) * rational_pow(p, -(nu + 1) * (k - 1));
    Rational r = x / y * z;
    r.canonicalize();
    return r;
}

namespace detail {

inline int kronecker2(i64 t) {
    i64 r = mod(t, 8);
    if (r % 2 == 0) return 0;
    return (r == 1 || r == 7) ? 1 : -1;
}

inline AlgebraicValue delta_p_power(i64 p, int e) {
    AlgebraicValue unit(p, 1);
    if (p % 4 == 1) return unit;
    AlgebraicValue v = unit;
    for (int i = 0; i < e % 4; ++i) v = v * AlgebraicValue::imag(p);
    return v;
}

struct OddRData {
    int ell = 0;
    int twice_d = 0;
    int legendre = 1;
};

inline OddRData odd_r_data(const JordanOdd& J, int r) {
    OddRData d;
    int sum = 0;
    for (const auto& b : J.blocks) {
        int diff = b.alpha - r;
        if (diff < 0 && (-diff) % 2 == 1) {
            ++d.ell;
            d.legendre *= jacobi(mod(b.eps, J.p), J.p);
        }
        if (b.alpha < r) sum += r - b.alpha;
    }
    d.twice_d = sum - 2 * r;
    return d;
}

inline AlgebraicValue v_r(const JordanOdd& J, const OddRData& d, VrConvention conv) {
    int e = 0;
    switch (conv) {
    case VrConvention::Calibrated: e = 2 * (d.ell / 2); break;
    case VrConvention::Literal: e = d.ell / 2; break;
    case VrConvention::PerElement: e = d.ell; break;
    }
    return Rational(d.legendre) * delta_p_power(J.p, e);
}

struct TwoRData {
    int ell = 0;       // size of L~(r-1)
    int eps = 1;       // product of the units over L~(r-1), mod 8
    i64 kappa = 0;     // sum of the units with alpha~ < r-1
    int delta = 1;
    int p_sign = 1;
    int twice_d = 0;
};

inline TwoRData two_r_data(const JordanTwo& J, int r) {
    TwoRData d;
    int sum = 0;
    for (const auto& h : J.diag) {
        int diff = h.alpha - (r - 1);
        if (diff < 0 && (-diff) % 2 == 1) {
            ++d.ell;
            d.eps = static_cast<int>(mod(static_cast<i64>(d.eps) * h.eps, 8));
        }
        if (h.alpha < r - 1) {
            d.kappa += h.eps;
            sum += r - 1 - h.alpha;
        }
        if (h.alpha == r - 1) d.delta = 0;
    }
    for (const auto& t : J.type2)
        if (t.scale < r) sum += 2 * (r - t.scale);
    int psum = 0;
    for (const auto& t : J.type3)
        if (t.scale < r) {
            sum += 2 * (r - t.scale);
            psum += t.scale - r;
        }
    d.p_sign = (psum % 2 == 0) ? 1 : -1;
    d.twice_d = sum - 2 * r;
    return d;
}

} // namespace detail

// The odd-prime explicit formula evaluated exactly; valid for any odd p.
inline Rational delta_yang_odd(const JordanOdd& J, i64 n, VrConvention conv = VrConvention::Calibrated) {
    const i64 p = J.p;
    auto [nu, np] = valuation(n, p);
    AlgebraicValue total(p, 1);
    const Rational one_minus = 1 - Rational(1, p);
    for (int r = 1; r <= nu; ++r) {
        auto d = detail::odd_r_data(J, r);
        if (d.ell % 2 != 0) continue;
        total += one_minus * (detail::v_r(J, d, conv) * AlgebraicValue::half_power(p, -d.twice_d));
    }
    auto d = detail::odd_r_data(J, nu + 1);
    AlgebraicValue f(p);
    if (d.ell % 2 == 0)
        f = AlgebraicValue(p, Rational(-1, p));
    else
        f = Rational(jacobi(mod(np, p), p)) * AlgebraicValue::half_power(p, -1);
    total += detail::v_r(J, d, conv) * f * AlgebraicValue::half_power(p, -d.twice_d);
    Rational v = total.to_rational();
    if (v < 0) fail(ErrorKind::NonRationalResult, "negative density " + v.get_str());
    return v;
}

inline Rational delta_yang_two(const JordanTwo& J, i64 n) {
    auto [nu, n2] = valuation(n, 2);
    AlgebraicValue total(2, 1);
    for (int r = 1; r <= nu + 3; ++r) {
        auto d = detail::two_r_data(J, r);
        if (d.delta == 0) continue;
        i64 mu = mod((mod(n2, 8) << std::min(nu + 3 - r, 3)) - d.kappa, 8);
        if (d.ell % 2 == 1) {
            int s = detail::kronecker2(mu * d.eps) * d.p_sign;
            if (s == 0) continue;
            total += Rational(s) * AlgebraicValue::half_power(2, -(d.twice_d + 3));
        } else {
            if (mu % 4 != 0) continue;
            int psi = (mu == 0) ? 1 : -1;
            int s = detail::kronecker2(d.eps) * d.p_sign * psi;
            total += Rational(s) * AlgebraicValue::half_power(2, -(d.twice_d + 2));
        }
    }
    Rational v = total.to_rational();
    if (v < 0) fail(ErrorKind::NonRationalResult, "negative density " + v.get_str());
    return v;
}

struct LdWitness {
    bool holds = true;
    i64 p = 0;
    int r = 0;
    std::string quantity; // "ell", "ell~" or "kappa"
    i64 value = 0;
};

struct LdEmpiricalResult {
    bool holds = true;
    i64 p = 0;
    i64 n = 0;
    Rational value;     // delta_p(n)
    Rational reference; // delta_p(p^nu_p(n))
};

struct OracleResult {
    Rational density;
    int nu = 0;             // level at which the value was read off
    std::string engine;     // "direct" or "blocks"
    std::vector<i128> counts; // N(nu), N(nu+1)
};

struct OracleOptions {
    bool conservative = false; // also require nu >= nu_p(4n|A|) + 2
    double direct_budget = 1e8;
    int max_nu = 64;
};

// Caches Jordan data, oracle histograms and densities for one form.
class LocalDensities {
public:
    explicit LocalDensities(QuadraticForm q) : q_(std::move(q)), bad_(bad_primes(q_)) {}

    const QuadraticForm& form() const { return q_; }
    const std::vector<i64>& bad() const { return bad_; }

    const JordanOdd& odd(i64 p) {
        auto it = odd_.find(p);
        if (it == odd_.end()) it = odd_.emplace(p, jordan_odd(q_, p)).first;
        return it->second;
    }

    const JordanTwo& two() {
        if (!two_) two_ = jordan_two(q_);
        return *two_;
    }

    Rational delta_bad(i64 p, i64 n) {
        if (n < 1) fail(ErrorKind::InvalidArgument, "delta_bad: n must be positive");
        if (!is_bad_prime(q_, p)) fail(ErrorKind::WrongBranch, "delta_bad called with p not dividing 2D");
        return p == 2 ? delta_yang_two(two(), n) : delta_yang_odd(odd(p), n);
    }

    Rational delta(i64 p, i64 n) {
        if (is_bad_prime(q_, p)) return delta_bad(p, n);
        return delta_good(q_, p, valuation(n, p).nu);
    }

    Rational varpi(i64 n) {
        Rational v = 1;
        for (i64 p : bad_) v *= delta_bad(p, n);
        return v;
    }

    LdWitness ld_condition() {
        for (i64 p : bad_) {
            if (p == 2) {
                const auto& J = two();
                int top = max_scale(J) + 2;
                for (int r = 1; r <= top; ++r) {
                    int ell = 0;
                    for (const auto& h : J.diag)
                        if (h.alpha - r < 0 && (r - h.alpha) % 2 == 1) ++ell;
                    if (ell % 2) return {false, 2, r, "ell~", ell};
                    i64 kappa = detail::two_r_data(J, r).kappa;
                    if (kappa % 4) return {false, 2, r, "kappa", kappa};
                }
            } else {
                const auto& J = odd(p);
                int top = max_scale(J) + 2;
                for (int r = 1; r <= top; ++r) {
                    int ell = detail::odd_r_data(J, r).ell;
                    if (ell % 2) return {false, p, r, "ell", ell};
                }
            }
        }
        return {};
    }

    LdEmpiricalResult ld_empirical(i64 n_max) {
        if (n_max < 2) fail(ErrorKind::InvalidArgument, "ld_empirical: n_max must be at least 2");
        for (i64 n = 1; n <= n_max; ++n)
            for (i64 p : bad_) {
                auto [nu, np] = valuation(n, p);
                Rational a = delta_bad(p, n), b = delta_bad(p, ipow(p, nu));
                if (a != b) return {false, p, n, a, b};
            }
        return {};
    }

    // Closed forms valid under the locally-determined condition.
    Rational delta_ld(i64 p, int nu) {
        if (nu < 0) fail(ErrorKind::InvalidArgument, "delta_ld: nu must be non-negative");
        if (!is_bad_prime(q_, p)) return delta_good(q_, p, nu);
        if (!ld_checked_) {
            ld_ok_ = ld_condition().holds;
            ld_checked_ = true;
        }
        if (!ld_ok_) fail(ErrorKind::ConditionNotSatisfied, "form is not locally determined by the sufficient condition");
        auto key = std::make_pair(p, nu);
        auto it = ld_cache_.find(key);
        if (it != ld_cache_.end()) return it->second;
        Rational v = p == 2 ? ld_two(nu) : ld_odd(p, nu);
        ld_cache_.emplace(key, v);
        return v;
    }

    OracleResult oracle(i64 p, i64 n, const OracleOptions& opt = {});

    // Counts of y mod p^nu with Q(y) = t, for every t mod p^nu.
    const std::vector<i128>& histogram(i64 p, int nu, std::string* engine = nullptr, double direct_budget = 1e8);

private:
    Rational ld_odd(i64 p, int nu) {
        const auto& J = odd(p);
        AlgebraicValue total(p, 1);
        const Rational one_minus = 1 - Rational(1, p);
        for (int r = 1; r <= nu; ++r) {
            auto d = detail::odd_r_data(J, r);
            total += one_minus * (detail::v_r(J, d, VrConvention::Calibrated) * AlgebraicValue::half_power(p, -d.twice_d));
        }
        auto d = detail::odd_r_data(J, nu + 1);
        // f(n) = -1/p when every l(r) is even
        total += Rational(-1) * (detail::v_r(J, d, VrConvention::Calibrated) * AlgebraicValue::half_power(p, -d.twice_d - 2));
        return total.to_rational();
    }

    Rational ld_two(int nu) {
        const auto& J = two();
        AlgebraicValue total(2, 1);
        for (int r = 1; r <= nu + 1; ++r) {
            auto d = detail::two_r_data(J, r);
            if (d.delta == 0) continue;
            int e = static_cast<int>(d.kappa / 4) + r / (nu + 1);
            int s = detail::kronecker2(d.eps) * d.p_sign * ((e % 2 == 0) ? 1 : -1);
            total += Rational(s) * AlgebraicValue::half_power(2, -(d.twice_d + 2));
        }
        return total.to_rational();
    }

    QuadraticForm q_;
    std::vector<i64> bad_;
    std::map<i64, JordanOdd> odd_;
    std::optional<JordanTwo> two_;
    bool ld_checked_ = false;
    bool ld_ok_ = false;
    std::map<std::pair<i64, int>, Rational> ld_cache_;
    std::map<std::pair<i64, int>, std::vector<i128>> hist_;
    std::map<std::pair<i64, int>, std::string> hist_engine_;
};

namespace detail {

inline std::vector<i128> block_histogram(const QBlock& b, i64 P) {
    std::vector<i128> h(static_cast<size_t>(P), 0);
    if (b.dim == 1) {
        for (i64 x = 0; x < P; ++x) h[mulmod(b.q11, mulmod(x, x, P), P)] += 1;
    } else {
        for (i64 x = 0; x < P; ++x) {
            i64 xx = mulmod(b.q11, mulmod(x, x, P), P);
            i64 lin = mulmod(b.q12, x, P);
            for (i64 y = 0; y < P; ++y) {
                i64 v = (xx + mulmod(lin, y, P) + mulmod(b.q22, mulmod(y, y, P), P)) % P;
                h[v] += 1;
            }
        }
    }
    return h;
}

inline std::vector<i128> cyclic_convolve(const std::vector<i128>& a, const std::vector<i128>& b) {
    const size_t P = a.size();
    std::vector<size_t> nb;
    for (size_t y = 0; y < P; ++y)
        if (b[y] != 0) nb.push_back(y);
    std::vector<i128> out(P, 0);
    for (size_t x = 0; x < P; ++x) {
        if (a[x] == 0) continue;
        for (size_t y : nb) {
            size_t t = x + y;
            if (t >= P) t -= P;
            out[t] += a[x] * b[y];
        }
    }
    return out;
}

inline void odometer_hist(const QuadraticForm& q, i64 P, std::vector<i128>& h) {
    const int m = q.m();
    std::vector<i64> y(m, 0);
    for (;;) {
        i128 s = 0;
        for (int i = 0; i < m; ++i) {
            s += static_cast<i128>(q.a(i, i) / 2) * y[i] * y[i];
            for (int j = i + 1; j < m; ++j) s += static_cast<i128>(q.a(i, j)) * y[i] * y[j];
        }
        i64 v = static_cast<i64>(s % P);
        if (v < 0) v += P;
        h[v] += 1;
        int i = 0;
        while (i < m && ++y[i] == P) y[i++] = 0;
        if (i == m) break;
    }
}

} // namespace detail

inline const std::vector<i128>& LocalDensities::histogram(i64 p, int nu, std::string* engine, double direct_budget) {
    auto key = std::make_pair(p, nu);
    auto it = hist_.find(key);
    if (it != hist_.end()) {
        if (engine) *engine = hist_engine_[key];
        return it->second;
    }
    const int m = q_.m();
    if (nu * m * std::log2(static_cast<double>(p)) > 125.0)
        fail(ErrorKind::ResourceLimit, "solution counts mod p^nu exceed 125 bits");
    i64 P = ipow(p, nu);
    std::vector<i128> h;
    std::string eng;
    if (std::pow(static_cast<double>(P), m) <= direct_budget) {
        h.assign(static_cast<size_t>(P), 0);
        detail::odometer_hist(q_, P, h);
        eng = "direct";
    } else {
        if (static_cast<double>(P) * P > 4e10) fail(ErrorKind::ResourceLimit, "histogram convolution over budget");
        std::vector<QBlock> blocks;
        if (p == 2) {
            int K = std::max(default_precision(q_, 2), nu + 1);
            auto J = jordan_two(q_, K);
            if (!verify_equivalence(q_, J)) fail(ErrorKind::PrecisionTooLow, "Jordan verification failed");
            blocks = q_blocks(J);
        } else {
            int K = std::max(default_precision(q_, p), nu + 1);
            auto J = jordan_odd(q_, p, K);
            if (!verify_equivalence(q_, J)) fail(ErrorKind::PrecisionTooLow, "Jordan verification failed");
            blocks = q_blocks(J);
        }
        h.assign(static_cast<size_t>(P), 0);
        h[0] = 1;
        for (const auto& b : blocks) {
            QBlock r = b;
            r.q11 = mod(r.q11, P);
            r.q12 = mod(r.q12, P);
            r.q22 = mod(r.q22, P);
            h = detail::cyclic_convolve(detail::block_histogram(r, P), h);
        }
        eng = "blocks";
    }
    hist_engine_[key] = eng;
    if (engine) *engine = eng;
    return hist_.emplace(key, std::move(h)).first->second;
}

inline OracleResult LocalDensities::oracle(i64 p, i64 n, const OracleOptions& opt) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "oracle: n must be positive");
    if (!is_prime(p)) fail(ErrorKind::InvalidArgument, "oracle: p must be prime");
    const int m = q_.m();
    int vn = valuation(n, p).nu;
    int smax = p == 2 ? max_scale(two()) : (is_bad_prime(q_, p) ? max_scale(odd(p)) : 0);
    // Solutions with Q(y) = n have gradient valuation at most [vn/2] + smax, so
    // counts scale by p^(m-1) from 2*([vn/2]+smax)+1 on (Hensel).
    int nu = std::max(2 * (vn / 2 + smax) + 1, vn + 1);
    if (opt.conservative) nu = std::max(nu, valuation(BigInt(4 * n) * q_.invariants().det_A, p) + 2);
    i128 pm1 = 1;
    for (int i = 0; i < m - 1; ++i) pm1 *= p;
    for (; nu <= opt.max_nu; ++nu) {
        std::string eng;
        i64 P0 = ipow(p, nu), P1 = ipow(p, nu + 1);
        i128 c0 = histogram(p, nu, &eng, opt.direct_budget)[mod(n, P0)];
        i128 c1 = histogram(p, nu + 1, nullptr, opt.direct_budget)[mod(n, P1)];
        if (c1 == c0 * pm1) {
            OracleResult res;
            res.nu = nu;
            res.engine = eng;
            res.counts = {c0, c1};
            BigInt num = 0, den = 1;
            {
                // i128 to BigInt via two halves
                auto to_big = [](i128 x) {
                    bool neg = x < 0;
                    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-x) : static_cast<unsigned __int128>(x);
                    BigInt hi = static_cast<unsigned long>(u >> 64), lo = static_cast<unsigned long>(u & ~0ULL);
                    BigInt r = (hi << 64) + lo;
                    return neg ? BigInt(-r) : r;
                };
                num = to_big(c0);
                mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(nu * (m - 1)));
            }
            res.density = Rational(num, den);
            res.density.canonicalize();
            return res;
        }
    }
    fail(ErrorKind::ResourceLimit, "oracle did not stabilize");
}

inline Rational delta_bad(const QuadraticForm& q, i64 p, i64 n) { return LocalDensities(q).delta_bad(p, n); }

inline Rational delta_oracle(const QuadraticForm& q, i64 p, i64 n, const OracleOptions& opt = {}) {
    return LocalDensities(q).oracle(p, n, opt).density;
}

inline LdWitness ld_condition(const QuadraticForm& q) { return LocalDensities(q).ld_condition(); }

inline LdEmpiricalResult ld_empirical(const QuadraticForm& q, i64 n_max) { return LocalDensities(q).ld_empirical(n_max); }

inline Rational delta_ld(const QuadraticForm& q, i64 p, int nu) { return LocalDensities(q).delta_ld(p, nu); }

inline Rational varpi(const QuadraticForm& q, i64 n) { return LocalDensities(q).varpi(n); }

// Closed form for sums of m = 4k' squares at p = 2; nu = 0 gives 1.
inline Rational delta2_sum_squares(int m, int nu) {
    if (m % 4 != 0 || m < 4) fail(ErrorKind::ConditionNotSatisfied, "sum-of-squares closed form needs 4 | m");
    if (nu < 0) fail(ErrorKind::InvalidArgument, "nu must be non-negative");
    if (nu == 0) return 1;
    const int k = m / 4;
    const int sgn = (k % 2 == 0) ? 1 : -1;
    Rational s = 1;
    for (int r = 2; r <= nu; ++r) s += Rational(sgn) * rational_pow(2, -(2 * k - 1) * (r - 1));
    s -= Rational(sgn) * rational_pow(2, -(2 * k - 1) * nu);
    return s;
}

// Closed form at p = 2 for level-one forms (8 | m).
inline Rational delta2_level_one(int m, int nu) {
    if (m % 8 != 0 || m < 8) fail(ErrorKind::ConditionNotSatisfied, "level-one closed form needs 8 | m");
    if (nu < 0) fail(ErrorKind::InvalidArgument, "nu must be non-negative");
    Rational a = 1 - rational_pow(2, -m / 2);
    Rational b = 1 - rational_pow(2, 1 - m / 2);
    Rational c = 1 - rational_pow(2, (1 - m / 2) * (nu + 1));
    Rational r = a / b * c;
    r.canonicalize();
    return r;
}

struct VarpiBounds {
    Rational lower;
    Rational upper;
};

inline VarpiBounds varpi_bounds(const QuadraticForm& q) {
    if (q.m() < 6) fail(ErrorKind::AssumptionViolated, "varpi bounds need m >= 6");
    const BigInt& det = q.invariants().det_A;
    if (valuation(det, 2) > q.m() + 1) fail(ErrorKind::AssumptionViolated, "nu_2(|A|) > m + 1");
    VarpiBounds b{Rational(1, 50), Rational(99, 50)};
    for (i64 p : bad_primes(q)) {
        if (p == 2) continue;
        if (valuation(det, p) > q.m() - 4)
            fail(ErrorKind::AssumptionViolated, "nu_p(|A|) > m - 4 at p = " + std::to_string(p));
        b.lower *= 1 - Rational(1, p);
        b.upper *= 1 + Rational(1, p);
    }
    b.lower.canonicalize();
    b.upper.canonicalize();
    return b;
}

} // namespace qfc
