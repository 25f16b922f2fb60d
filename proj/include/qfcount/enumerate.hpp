#pragma once

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "qform.hpp"

namespace qfc {

namespace detail {

// Exact bounds for enumerating y with y^T A y <= 2N, innermost coordinate first
// eliminated. With delta_k the k-th leading minor and T_k = delta_{k-1} times
// the Schur complement of the leading (k-1)-block,
//   W_k = ((delta_k y_k + b_k)^2 + delta_{k-1} W_{k+1}) / delta_k,  W_1 = y^T A y,
// where b_k = sum_{j>k} T_k[k][j] y_j. All quantities are integers.
struct SchurChain {
    int r = 0;
    std::vector<i64> delta;            // delta[0] = 1, delta[k] for k = 1..r
    std::vector<std::vector<i64>> row; // row[k][j] = T_k[k][j] for j > k (1-based)

    explicit SchurChain(const std::vector<i64>& a, int m) : r(m), delta(m + 1, 1), row(m + 1, std::vector<i64>(m + 1, 0)) {
        auto minors = leading_minors(a, m);
        for (int k = 1; k <= m; ++k) {
            if (!minors[k - 1].fits_slong_p()) fail(ErrorKind::ResourceLimit, "leading minor exceeds 64 bits");
            delta[k] = minors[k - 1].get_si();
        }
        for (int k = 1; k <= m; ++k) {
            // Schur complement of the leading (k-1) block, computed exactly.
            const int s = k - 1;
            std::vector<Rational> pinv;
            if (s > 0) {
                std::vector<i64> P(static_cast<size_t>(s) * s);
                for (int i = 0; i < s; ++i)
                    for (int j = 0; j < s; ++j) P[i * s + j] = a[i * m + j];
                pinv = inverse_exact(P, s);
            }
            for (int j = k + 1; j <= m; ++j) {
                Rational v = a[(k - 1) * m + (j - 1)];
                for (int x = 0; x < s; ++x)
                    for (int y = 0; y < s; ++y) v -= Rational(a[(k - 1) * m + x]) * pinv[x * s + y] * Rational(a[y * m + (j - 1)]);
                v *= delta[k - 1];
                v.canonicalize();
                if (v.get_den() != 1 || !v.get_num().fits_slong_p()) fail(ErrorKind::ResourceLimit, "Schur entry not a small integer");
                row[k][j] = v.get_num().get_si();
            }
        }
    }
};

inline std::vector<i64> permuted(const QuadraticForm& q, const std::vector<int>& perm) {
    const int m = q.m();
    std::vector<i64> a(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a[i * m + j] = q.a(perm[i], perm[j]);
    return a;
}

inline void check_range(const SchurChain& ch, i64 N) {
    double dmax = 1;
    for (i64 d : ch.delta) dmax = std::max(dmax, static_cast<double>(d));
    if (2.0 * static_cast<double>(N) * dmax * dmax * dmax > 4e18) fail(ErrorKind::ResourceLimit, "enumeration bound overflows 64 bits");
}

// Lattice points with y^T A y <= 2N, estimated by the ellipsoid volume.
inline double ellipsoid_volume(int m, double det, double N) {
    return std::pow(std::numbers::pi * 2.0 * N, m / 2.0) / (std::tgamma(m / 2.0 + 1) * std::sqrt(det));
}

// Calls f(y, Q(y)) for every y with Q(y) <= N; y is in chain order. The outermost
// coordinate only takes values congruent to part mod parts.
template <class F>
void enumerate_chain(const SchurChain& ch, i64 N, F&& f, int part = 0, int parts = 1) {
    const int r = ch.r;
    std::vector<i64> y(r + 1, 0), W(r + 2, 0);
    const i64 twoN = 2 * N;
    auto rec = [&](auto&& self, int k) -> void {
        const i64 dk = ch.delta[k], dk1 = ch.delta[k - 1];
        i64 disc = dk1 * (twoN * dk - W[k + 1]);
        if (disc < 0) return;
        i64 s = static_cast<i64>(isqrt(static_cast<u64>(disc)));
        i64 b = 0;
        for (int j = k + 1; j <= r; ++j) b += ch.row[k][j] * y[j];
        // y_k in [ceil((-s - b)/dk), floor((s - b)/dk)]
        i64 lo = -s - b, hi = s - b;
        i64 ylo = lo >= 0 ? (lo + dk - 1) / dk : -((-lo) / dk);
        i64 yhi = hi >= 0 ? hi / dk : -((-hi + dk - 1) / dk);
        for (i64 v = ylo; v <= yhi; ++v) {
            if (k == r && parts > 1 && mod(v, parts) != part) continue;
            y[k] = v;
            i64 t = dk * v + b;
            W[k] = (t * t + dk1 * W[k + 1]) / dk;
            if (k == 1)
                f(y, W[1] / 2);
            else
                self(self, k - 1);
        }
    };
    rec(rec, r);
}

inline std::vector<std::vector<int>> components(const QuadraticForm& q) {
    const int m = q.m();
    std::vector<int> comp(m, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < m; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s}, members;
        comp[s] = static_cast<int>(out.size());
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            members.push_back(i);
            for (int j = 0; j < m; ++j)
                if (j != i && q.a(i, j) != 0 && comp[j] < 0) {
                    comp[j] = comp[s];
                    stack.push_back(j);
                }
        }
        std::sort(members.begin(), members.end());
        out.push_back(members);
    }
    return out;
}

// hist[n] = #{y in Z^r : Q_block(y) = n}, n <= N.
inline std::vector<i64> block_counts(const std::vector<i64>& a, int r, i64 N, int threads, double budget) {
    SchurChain ch(a, r);
    check_range(ch, N);
    double det = static_cast<double>(ch.delta[r]);
    if (ellipsoid_volume(r, det, static_cast<double>(N)) > budget) fail(ErrorKind::ResourceLimit, "enumeration over budget");
    threads = std::max(1, threads);
    std::vector<std::vector<i64>> parts(threads, std::vector<i64>(static_cast<size_t>(N) + 1, 0));
    auto work = [&](int t) {
        auto& h = parts[t];
        enumerate_chain(ch, N, [&](const std::vector<i64>&, i64 v) { ++h[v]; }, t, threads);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (int t = 1; t < threads; ++t)
        for (size_t i = 0; i <= static_cast<size_t>(N); ++i) parts[0][i] += parts[t][i];
    return parts[0];
}

// Truncated convolution; iterates over the nonzero entries of the sparser side.
inline std::vector<i64> convolve_upto(const std::vector<i64>& a, const std::vector<i64>& b, i64 N) {
    std::vector<size_t> na, nb;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i]) na.push_back(i);
    for (size_t i = 0; i < b.size(); ++i)
        if (b[i]) nb.push_back(i);
    const auto& sx = na.size() <= nb.size() ? a : b;
    const auto& dx = na.size() <= nb.size() ? b : a;
    const auto& sidx = na.size() <= nb.size() ? na : nb;
    std::vector<i64> out(static_cast<size_t>(N) + 1, 0);
    for (size_t i : sidx) {
        const i64 w = sx[i];
        for (size_t j = 0; i + j <= static_cast<size_t>(N) && j < dx.size(); ++j) {
            if (!dx[j]) continue;
            i64 t;
            if (__builtin_mul_overflow(w, dx[j], &t) || __builtin_add_overflow(out[i + j], t, &out[i + j]))
                fail(ErrorKind::ResourceLimit, "representation count exceeds 64 bits");
        }
    }
    return out;
}

} // namespace detail

// Visits every y in Z^m with Q(y) <= N, calling f(y, Q(y)) with y in the
// original coordinates. reversed = true eliminates coordinates in the opposite
// order, which gives an independent set of bounds.
template <class F>
void enumerate_ellipsoid(const QuadraticForm& q, i64 N, F&& f, bool reversed = false, double budget = 4e9) {
    const int m = q.m();
    if (N < 0) return;
    std::vector<int> perm(m);
    for (int i = 0; i < m; ++i) perm[i] = reversed ? m - 1 - i : i;
    detail::SchurChain ch(detail::permuted(q, perm), m);
    detail::check_range(ch, N);
    if (detail::ellipsoid_volume(m, q.invariants().det_A.get_d(), static_cast<double>(N)) > budget)
        fail(ErrorKind::ResourceLimit, "enumeration over budget");
    std::vector<i64> y(m);
    detail::enumerate_chain(ch, N, [&](const std::vector<i64>& yc, i64 v) {
        for (int i = 0; i < m; ++i) y[perm[i]] = yc[i + 1];
        f(y, v);
    });
}

struct RepTable {
    i64 N = 0;
    std::vector<i64> counts; // counts[n] = r(n, Q) for 0 <= n <= N; counts[0] = 1

    i64 operator[](i64 n) const { return counts.at(static_cast<size_t>(n)); }
};

inline RepTable rep_table(const QuadraticForm& q, i64 N, int threads = 1, double budget = 4e9) {
    if (N < 1) fail(ErrorKind::InvalidArgument, "rep_table: N must be positive");
    if (N > 1000000000) fail(ErrorKind::ResourceLimit, "rep_table: N above 10^9");
    std::vector<std::vector<i64>> hists;
    for (const auto& comp : detail::components(q)) {
        const int r = static_cast<int>(comp.size());
        std::vector<i64> a(static_cast<size_t>(r) * r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) a[i * r + j] = q.a(comp[i], comp[j]);
        hists.push_back(detail::block_counts(a, r, N, threads, budget));
    }
    // densest histograms last, so the sparse ones are combined cheaply first
    auto nnz = [](const std::vector<i64>& h) { return std::count_if(h.begin(), h.end(), [](i64 x) { return x != 0; }); };
    std::stable_sort(hists.begin(), hists.end(), [&](const auto& x, const auto& y) { return nnz(x) < nnz(y); });
    std::vector<i64> acc = hists.front();
    for (size_t i = 1; i < hists.size(); ++i) {
        double work = static_cast<double>(std::min(nnz(acc), nnz(hists[i]))) * static_cast<double>(N + 1);
        if (work > budget) fail(ErrorKind::ResourceLimit, "convolution over budget");
        acc = detail::convolve_upto(acc, hists[i], N);
    }
    return {N, std::move(acc)};
}

} // namespace qfc
