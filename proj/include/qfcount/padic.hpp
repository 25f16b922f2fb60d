#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "qform.hpp"

namespace qfc {

struct OddBlock {
    int alpha = 0;
    i64 eps = 1;  // representative of the unit mod p
    i64 unit = 1; // the unit itself, exact mod p^(K - alpha)
};

struct JordanOdd {
    i64 p = 3;
    int K = 0;
    int m = 0;
    std::vector<OddBlock> blocks; // sorted by alpha
    std::vector<i64> U;           // m x m, column h is the basis vector of block h, entries mod p^K
};

// A diagonal block eps * 2^alpha x^2 of Q.
struct TwoDiag {
    int alpha = 0;
    int eps = 1;  // unit mod 8
    i64 unit = 1; // exact mod 2^(K - alpha)
};

// A binary block 2^scale (a x^2 + 2 b xy + c y^2)/2 of Q, i.e. 2^scale [[a, b], [b, c]] in A,
// with a, c even and b odd. Hyperbolic when ac - b^2 = 7 mod 8, the x^2+xy+y^2 type when = 3.
struct TwoBinary {
    int scale = 0;
    int eps = 1; // class representative; eps*H ~ H and eps*E ~ E over Z_2
    i64 a = 0, b = 1, c = 0;
};

struct JordanTwo {
    int K = 0;
    int m = 0;
    std::vector<TwoDiag> diag;
    std::vector<TwoBinary> type2;
    std::vector<TwoBinary> type3;
    std::vector<i64> U; // columns: diag blocks, then type2 pairs, then type3 pairs
};

// Q restricted to one Jordan block, as integer coefficients mod p^K:
// dim 1: q11 x^2, dim 2: q11 x^2 + q12 xy + q22 y^2.
struct QBlock {
    int dim = 1;
    i64 q11 = 0, q12 = 0, q22 = 0;
};

namespace detail {

inline int val_mod(i64 x, i64 p, int kw) {
    if (x == 0) return kw;
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return std::min(v, kw);
}

struct Reducer {
    int m;
    i64 p;
    int kw;
    i64 W;
    std::vector<i64> C, U;

    i64& c(int i, int j) { return C[static_cast<size_t>(i) * m + j]; }
    i64& u(int i, int j) { return U[static_cast<size_t>(i) * m + j]; }

    void swap_basis(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < m; ++r) std::swap(c(r, i), c(r, j));
        for (int r = 0; r < m; ++r) std::swap(c(i, r), c(j, r));
        for (int r = 0; r < m; ++r) std::swap(u(r, i), u(r, j));
    }

    // e_t <- e_t + f e_s
    void add_basis(int t, int s, i64 f) {
        f = mod(f, W);
        if (f == 0) return;
        for (int r = 0; r < m; ++r) c(r, t) = mod(c(r, t) + mulmod(f, c(r, s), W), W);
        for (int r = 0; r < m; ++r) c(t, r) = mod(c(t, r) + mulmod(f, c(s, r), W), W);
        for (int r = 0; r < m; ++r) u(r, t) = mod(u(r, t) + mulmod(f, u(r, s), W), W);
    }

    i64 ppow(int e) const { return ipow(p, e); }

    void pivot1(int s, int from) {
        int v = val_mod(c(s, s), p, kw);
        i64 uinv = invmod(c(s, s) / ppow(v), W);
        for (int t = from; t < m; ++t) {
            if (t == s) continue;
            i64 ct = c(t, s);
            if (ct == 0) continue;
            i64 f = mulmod(ct / ppow(v), uinv, W);
            add_basis(t, s, W - f);
        }
    }

    void pivot2(int s, int from) {
        int v = val_mod(c(s, s + 1), p, kw);
        i64 x = c(s, s), y = c(s, s + 1), z = c(s + 1, s + 1);
        i64 q2v = ppow(2 * v);
        i64 det = mod(mulmod(x, z, W) - mulmod(y, y, W), W);
        i64 dinv = invmod(det / q2v, W);
        for (int t = from; t < m; ++t) {
            if (t == s || t == s + 1) continue;
            i64 c1 = c(s, t), c2 = c(s + 1, t);
            if (c1 == 0 && c2 == 0) continue;
            i64 g1 = mod(mulmod(z, c1, W) - mulmod(y, c2, W), W);
            i64 g2 = mod(mulmod(x, c2, W) - mulmod(y, c1, W), W);
            i64 f1 = mulmod(g1 / q2v, dinv, W);
            i64 f2 = mulmod(g2 / q2v, dinv, W);
            add_basis(t, s, W - f1);
            add_basis(t, s + 1, W - f2);
        }
    }
};

inline Reducer make_reducer(const QuadraticForm& q, i64 p, int kw) {
    Reducer r;
    r.m = q.m();
    r.p = p;
    r.kw = kw;
    long double bits = kw * std::log2(static_cast<long double>(p));
    if (bits > 61.0L) fail(ErrorKind::ResourceLimit, "working precision p^K exceeds 61 bits");
    r.W = ipow(p, kw);
    r.C.resize(static_cast<size_t>(r.m) * r.m);
    r.U.assign(static_cast<size_t>(r.m) * r.m, 0);
    i64 half = (p == 2) ? 1 : invmod(2, r.W);
    for (int i = 0; i < r.m; ++i) {
        r.u(i, i) = 1;
        for (int j = 0; j < r.m; ++j) r.c(i, j) = mulmod(mod(q.a(i, j), r.W), half, r.W);
    }
    return r;
}

// Binary classification from the unit part of 2^v [[x, y], [y, z]].
inline int binary_type(i64 x, i64 y, i64 z, int v) {
    i64 s = i64(1) << v;
    i64 d = mod(((x / s) % 8) * ((z / s) % 8) - ((y / s) % 8) * ((y / s) % 8), 8);
    if (d == 7) return 2;
    if (d == 3) return 3;
    fail(ErrorKind::PrecisionTooLow, "binary block with determinant class " + std::to_string(d));
}

inline i64 det_mod_p(std::vector<i64> a, int m, i64 p) {
    i64 det = 1;
    for (int k = 0; k < m; ++k) {
        int piv = -1;
        for (int r = k; r < m; ++r)
            if (mod(a[r * m + k], p) != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != k) {
            for (int j = 0; j < m; ++j) std::swap(a[k * m + j], a[piv * m + j]);
            det = p - det;
        }
        i64 inv = invmod(a[k * m + k], p);
        det = mulmod(det, mod(a[k * m + k], p), p);
        for (int i = k + 1; i < m; ++i) {
            i64 f = mulmod(mod(a[i * m + k], p), inv, p);
            for (int j = k; j < m; ++j) a[i * m + j] = mod(a[i * m + j] - mulmod(f, a[k * m + j], p), p);
        }
    }
    return mod(det, p);
}

// U^T X U mod W, computed directly.
inline std::vector<i64> congruent(const std::vector<i64>& X, const std::vector<i64>& U, int m, i64 W) {
    std::vector<i64> T(static_cast<size_t>(m) * m, 0), R(static_cast<size_t>(m) * m, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            i128 s = 0;
            for (int k = 0; k < m; ++k) s += static_cast<i128>(mod(X[i * m + k], W)) * U[k * m + j] % W;
            T[i * m + j] = static_cast<i64>(s % W);
        }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            i128 s = 0;
            for (int k = 0; k < m; ++k) s += static_cast<i128>(U[k * m + i]) * T[k * m + j] % W;
            R[i * m + j] = static_cast<i64>(s % W);
        }
    return R;
}

} // namespace detail

inline int default_precision(const QuadraticForm& q, i64 p) {
    return valuation(BigInt(2 * q.invariants().det_A), p) + 4;
}

inline JordanOdd jordan_odd(const QuadraticForm& q, i64 p, int K = -1) {
    if (p == 2 || !is_prime(p)) fail(ErrorKind::InvalidArgument, "jordan_odd needs an odd prime");
    int need = valuation(BigInt(2 * q.invariants().det_A), p) + 3;
    if (K < 0) K = need + 1;
    if (K < need) fail(ErrorKind::PrecisionTooLow, "K below nu_p(2|A|)+3");
    auto r = detail::make_reducer(q, p, K);
    const int m = q.m();
    for (int s = 0; s < m; ++s) {
        int best = K, bi = -1, bj = -1;
        for (int i = s; i < m; ++i)
            for (int j = i; j < m; ++j) {
                int v = detail::val_mod(r.c(i, j), p, K);
                if (v < best || (v == best && i == j && bi != bj)) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best >= K) fail(ErrorKind::PrecisionTooLow, "degenerate block at precision K");
        if (bi != bj) {
            bool diag = false;
            for (int i = s; i < m && !diag; ++i)
                if (detail::val_mod(r.c(i, i), p, K) == best) {
                    bi = bj = i;
                    diag = true;
                }
            if (!diag) r.add_basis(bi, bj, 1);
        }
        r.swap_basis(s, bi);
        r.pivot1(s, s + 1);
    }
    JordanOdd J;
    J.p = p;
    J.K = K;
    J.m = m;
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::vector<OddBlock> raw(m);
    for (int s = 0; s < m; ++s) {
        int v = detail::val_mod(r.c(s, s), p, K);
        raw[s].alpha = v;
        raw[s].unit = r.c(s, s) / ipow(p, v);
        raw[s].eps = mod(raw[s].unit, p);
    }
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return raw[x].alpha < raw[y].alpha; });
    J.U.assign(static_cast<size_t>(m) * m, 0);
    for (int h = 0; h < m; ++h) {
        J.blocks.push_back(raw[order[h]]);
        for (int i = 0; i < m; ++i) J.U[i * m + h] = r.U[i * m + order[h]];
    }
    return J;
}

inline JordanTwo jordan_two(const QuadraticForm& q, int K = -1) {
    int need = valuation(BigInt(2 * q.invariants().det_A), 2) + 4;
    if (K < 0) K = need;
    if (K < need) fail(ErrorKind::PrecisionTooLow, "K below nu_2(2|A|)+4");
    // A is returned mod 2^(K+1), i.e. M mod 2^K. A binary pivot at scale v only
    // clears couplings mod 2^(kw - 2v), so the reduction runs with 2 nu_2(2|A|)
    // guard bits and is truncated afterwards.
    const int guard = std::min(2 * (need - 4), 60 - (K + 1));
    const int kw = K + 1 + std::max(guard, 0);
    auto r = detail::make_reducer(q, 2, kw);
    const int m = q.m();
    struct Blk {
        int start, dim, v;
    };
    std::vector<Blk> blks;
    int s = 0;
    while (s < m) {
        int best = kw, bi = -1, bj = -1;
        for (int i = s; i < m; ++i)
            for (int j = i; j < m; ++j) {
                int v = detail::val_mod(r.c(i, j), 2, kw);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best >= kw) fail(ErrorKind::PrecisionTooLow, "degenerate block at precision K");
        int di = -1;
        for (int i = s; i < m; ++i)
            if (detail::val_mod(r.c(i, i), 2, kw) == best) {
                di = i;
                break;
            }
        if (di >= 0) {
            r.swap_basis(s, di);
            r.pivot1(s, s + 1);
            blks.push_back({s, 1, best});
            s += 1;
        } else {
            r.swap_basis(s, bi);
            if (bj == s) bj = bi;
            r.swap_basis(s + 1, bj);
            if (2 * best >= kw) fail(ErrorKind::PrecisionTooLow, "binary block too deep for precision K");
            r.pivot2(s, s + 2);
            blks.push_back({s, 2, best});
            s += 2;
        }
    }
    // E + E ~ H + H at equal scale: rewrite pairs of x^2+xy+y^2 blocks.
    for (int round = 0;; ++round) {
        if (round > m) fail(ErrorKind::PrecisionTooLow, "binary canonicalization did not settle");
        int s1 = -1, s2 = -1;
        for (size_t x = 0; x < blks.size() && s2 < 0; ++x) {
            const auto& b = blks[x];
            if (b.dim != 2 || detail::binary_type(r.c(b.start, b.start), r.c(b.start, b.start + 1),
                                                  r.c(b.start + 1, b.start + 1), b.v) != 3)
                continue;
            for (size_t y = x + 1; y < blks.size(); ++y) {
                const auto& b2 = blks[y];
                if (b2.dim == 2 && b2.v == b.v &&
                    detail::binary_type(r.c(b2.start, b2.start), r.c(b2.start, b2.start + 1),
                                        r.c(b2.start + 1, b2.start + 1), b2.v) == 3) {
                    s1 = b.start;
                    s2 = b2.start;
                    break;
                }
            }
        }
        if (s2 < 0) break;
        r.add_basis(s1, s2, 1);
        r.pivot2(s1, s1 + 2);
    }
    {
        const i64 Wout = i64(1) << (K + 1);
        for (auto& x : r.C) x = mod(x, Wout);
        for (auto& x : r.U) x = mod(x, Wout);
    }
    JordanTwo J;
    J.K = K;
    J.m = m;
    std::vector<int> cols;
    std::vector<std::pair<int, TwoDiag>> diag;
    std::vector<std::pair<int, TwoBinary>> t2, t3;
    for (const auto& b : blks) {
        if (b.dim == 1) {
            TwoDiag d;
            d.alpha = b.v - 1;
            d.unit = r.c(b.start, b.start) >> b.v;
            d.eps = static_cast<int>(mod(d.unit, 8));
            diag.emplace_back(b.start, d);
        } else {
            TwoBinary t;
            i64 x = r.c(b.start, b.start), y = r.c(b.start, b.start + 1), z = r.c(b.start + 1, b.start + 1);
            if (detail::val_mod(y, 2, kw) != b.v) fail(ErrorKind::PrecisionTooLow, "binary block lost its scale");
            t.scale = b.v;
            t.a = x >> b.v;
            t.b = y >> b.v;
            t.c = z >> b.v;
            (detail::binary_type(x, y, z, b.v) == 2 ? t2 : t3).emplace_back(b.start, t);
        }
    }
    auto by_scale = [](auto& v, auto key) {
        std::stable_sort(v.begin(), v.end(), [&](const auto& x, const auto& y) { return key(x.second) < key(y.second); });
    };
    by_scale(diag, [](const TwoDiag& d) { return d.alpha; });
    by_scale(t2, [](const TwoBinary& t) { return t.scale; });
    by_scale(t3, [](const TwoBinary& t) { return t.scale; });
    for (auto& [st, d] : diag) {
        J.diag.push_back(d);
        cols.push_back(st);
    }
    for (auto& [st, t] : t2) {
        J.type2.push_back(t);
        cols.push_back(st);
        cols.push_back(st + 1);
    }
    for (auto& [st, t] : t3) {
        J.type3.push_back(t);
        cols.push_back(st);
        cols.push_back(st + 1);
    }
    J.U.assign(static_cast<size_t>(m) * m, 0);
    for (int h = 0; h < m; ++h)
        for (int i = 0; i < m; ++i) J.U[i * m + h] = r.U[i * m + cols[h]];
    return J;
}

// Block matrices in the working convention: M mod p^K for odd p, A mod 2^(K+1) for p = 2.
inline std::vector<i64> normal_form(const JordanOdd& J) {
    const int m = J.m;
    i64 W = ipow(J.p, J.K);
    std::vector<i64> N(static_cast<size_t>(m) * m, 0);
    for (int h = 0; h < m; ++h) N[h * m + h] = mulmod(ipow(J.p, J.blocks[h].alpha), J.blocks[h].unit, W);
    return N;
}

inline std::vector<i64> normal_form(const JordanTwo& J) {
    const int m = J.m;
    i64 W = i64(1) << (J.K + 1);
    std::vector<i64> N(static_cast<size_t>(m) * m, 0);
    int h = 0;
    for (const auto& d : J.diag) {
        N[h * m + h] = mulmod(i64(1) << (d.alpha + 1), d.unit, W);
        ++h;
    }
    for (const auto* list : {&J.type2, &J.type3})
        for (const auto& t : *list) {
            i64 s = i64(1) << t.scale;
            N[h * m + h] = mulmod(s, t.a, W);
            N[h * m + h + 1] = N[(h + 1) * m + h] = mulmod(s, t.b, W);
            N[(h + 1) * m + h + 1] = mulmod(s, t.c, W);
            h += 2;
        }
    return N;
}

inline bool verify_equivalence(const QuadraticForm& q, const JordanOdd& J) {
    const int m = q.m();
    if (J.m != m || static_cast<int>(J.blocks.size()) != m) return false;
    i64 W = ipow(J.p, J.K);
    std::vector<i64> M(static_cast<size_t>(m) * m);
    i64 half = invmod(2, W);
    for (int i = 0; i < m * m; ++i) M[i] = mulmod(mod(q.matrix()[i], W), half, W);
    if (detail::congruent(M, J.U, m, W) != normal_form(J)) return false;
    return detail::det_mod_p(J.U, m, J.p) != 0;
}

inline bool verify_equivalence(const QuadraticForm& q, const JordanTwo& J) {
    const int m = q.m();
    if (J.m != m || static_cast<int>(J.diag.size() + 2 * (J.type2.size() + J.type3.size())) != m) return false;
    i64 W = i64(1) << (J.K + 1);
    if (detail::congruent(q.matrix(), J.U, m, W) != normal_form(J)) return false;
    return detail::det_mod_p(J.U, m, 2) != 0;
}

inline std::vector<QBlock> q_blocks(const JordanOdd& J) {
    i64 W = ipow(J.p, J.K);
    std::vector<QBlock> out;
    for (const auto& b : J.blocks) out.push_back({1, mulmod(ipow(J.p, b.alpha), b.unit, W), 0, 0});
    return out;
}

// Coefficients of Q on each block mod 2^K.
inline std::vector<QBlock> q_blocks(const JordanTwo& J) {
    i64 W = i64(1) << J.K;
    std::vector<QBlock> out;
    for (const auto& d : J.diag) out.push_back({1, mulmod(i64(1) << d.alpha, d.unit, W), 0, 0});
    for (const auto* list : {&J.type2, &J.type3})
        for (const auto& t : *list) {
            i64 s = i64(1) << t.scale;
            out.push_back({2, mulmod(s, t.a / 2, W), mulmod(s, t.b, W), mulmod(s, t.c / 2, W)});
        }
    return out;
}

// Largest exponent of p among the Jordan constituents of A.
inline int max_scale(const JordanOdd& J) {
    int s = 0;
    for (const auto& b : J.blocks) s = std::max(s, b.alpha);
    return s;
}

inline int max_scale(const JordanTwo& J) {
    int s = 0;
    for (const auto& d : J.diag) s = std::max(s, d.alpha + 1);
    for (const auto& t : J.type2) s = std::max(s, t.scale);
    for (const auto& t : J.type3) s = std::max(s, t.scale);
    return s;
}

} // namespace qfc
