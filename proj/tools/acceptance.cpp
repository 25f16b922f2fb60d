// Acceptance checks. `acceptance <id>` runs one criterion and prints a single
// PASS/FAIL line; `acceptance all` runs every criterion in turn.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qfcount/qfcount.hpp"

using namespace qfc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string str(const Rational& r) { return r.get_str(); }

std::string num(double x) {
    char b[64];
    std::snprintf(b, sizeof b, "%.6g", x);
    return b;
}

// r(n) for E8 in the even coordinate model: vectors of Z^8 or (Z + 1/2)^8
// with even coordinate sum, Q = |x|^2 / 2. Counted coordinate by coordinate,
// tracking the norm and the coordinate sum modulo 4 of the doubled vector.
std::vector<i64> e8_counts(i64 N) {
    std::vector<i64> r(static_cast<size_t>(N) + 1, 0);
    for (int half = 0; half < 2; ++half) {
        // doubled coordinates t: even for Z^8, odd for (Z + 1/2)^8; Q = |t|^2 / 8
        const i64 S = 8 * N;
        std::vector<std::vector<i64>> acc(static_cast<size_t>(S) + 1, std::vector<i64>(4, 0));
        acc[0][0] = 1;
        for (int c = 0; c < 8; ++c) {
            std::vector<std::vector<i64>> nxt(static_cast<size_t>(S) + 1, std::vector<i64>(4, 0));
            for (i64 s = 0; s <= S; ++s)
                for (int j = 0; j < 4; ++j) {
                    if (!acc[s][j]) continue;
                    const i64 R = static_cast<i64>(std::sqrt(static_cast<double>(S - s)));
                    for (i64 t = -R; t <= R; ++t) {
                        if ((t % 2 != 0) != (half == 1)) continue;
                        nxt[s + t * t][((j + t) % 4 + 4) % 4] += acc[s][j];
                    }
                }
            acc.swap(nxt);
        }
        // coordinate sum even means the doubled sum is 0 mod 4
        for (i64 s = 0; s <= S; s += 8) r[s / 8] += acc[s][0];
    }
    return r;
}

Outcome c1() {
    Outcome o;
    int checked = 0;
    for (const auto& q : fixtures::all()) {
        LocalDensities L(q);
        for (i64 p : L.bad())
            for (i64 n = 1; n <= 200; ++n) {
                Rational a = L.delta_bad(p, n), b = L.oracle(p, n, {}).density;
                ++checked;
                if (a != b && o.pass) {
                    o.pass = false;
                    o.detail = q.name() + " p=" + std::to_string(p) + " n=" + std::to_string(n) + " closed=" + str(a) +
                               " oracle=" + str(b) + "; ";
                }
            }
    }
    struct Named {
        QuadraticForm q;
        i64 p, n;
        Rational want;
    };
    std::vector<Named> named{{fixtures::four_squares(), 2, 2, Rational(3, 2)},
                             {fixtures::six_squares(), 2, 3, Rational(5, 4)},
                             {fixtures::example3(), 3, 1, Rational(4, 3)}};
    std::string vals;
    for (auto& t : named) {
        Rational got = delta_bad(t.q, t.p, t.n);
        vals += " " + t.q.name() + ":" + str(got);
        if (got != t.want) o.pass = false;
    }
    Rational g = delta_oracle(fixtures::four_squares(), 3, 1);
    Rational y = delta_good(fixtures::four_squares(), 3, 0);
    vals += " four_squares@3:" + str(g) + "/" + str(y);
    if (g != Rational(8, 9) || y != Rational(8, 9)) o.pass = false;
    o.detail += std::to_string(checked) + " pairs;" + vals;
    return o;
}

Outcome c2() {
    Outcome o;
    int checked = 0;
    for (const auto& q : fixtures::all()) {
        LocalDensities L(q);
        for (i64 p : {3, 5, 7}) {
            if (is_bad_prime(q, p)) continue;
            for (i64 n = 1; n <= 50; ++n) {
                int nu = 0;
                for (i64 t = n; t % p == 0; t /= p) ++nu;
                Rational a = delta_good(q, p, nu), b = L.oracle(p, n, {}).density;
                ++checked;
                if (a != b && o.pass) {
                    o.pass = false;
                    o.detail = q.name() + " p=" + std::to_string(p) + " n=" + std::to_string(n) + "; ";
                }
            }
        }
    }
    o.detail += std::to_string(checked) + " pairs";
    return o;
}

Outcome c3() {
    Outcome o;
    int checked = 0;
    auto cmp = [&](const QuadraticForm& q, const std::function<Rational(int)>& closed) {
        LocalDensities L(q);
        for (int nu = 0; nu <= 10; ++nu) {
            ++checked;
            if (closed(nu) != L.delta_bad(2, i64(1) << nu)) {
                o.pass = false;
                o.detail += q.name() + " nu=" + std::to_string(nu) + " mismatch; ";
            }
        }
    };
    cmp(fixtures::four_squares(), [](int nu) { return delta2_sum_squares(4, nu); });
    cmp(fixtures::eight_squares(), [](int nu) { return delta2_sum_squares(8, nu); });
    cmp(fixtures::e8(), [](int nu) { return delta2_level_one(8, nu); });
    // nu = 0: odd n
    auto four = fixtures::four_squares();
    for (i64 n = 1; n <= 21; n += 2)
        if (delta_bad(four, 2, n) != 1) o.pass = false;
    Rational a = delta2_sum_squares(4, 0), b = delta2_level_one(8, 0);
    if (a != 1 || b != Rational(15, 16)) o.pass = false;
    o.detail += std::to_string(checked) + " levels; nu=0: four_squares " + str(a) + ", e8 " + str(b);
    return o;
}

Outcome c4() {
    Outcome o;
    for (const auto& q : {fixtures::four_squares(), fixtures::eight_squares(), fixtures::e8(), fixtures::example3()}) {
        bool h = ld_condition(q).holds;
        o.detail += q.name() + "=" + (h ? "true" : "false") + " ";
        if (!h) o.pass = false;
    }
    auto w = ld_condition(fixtures::six_squares());
    o.detail += "six_squares=" + std::string(w.holds ? "true" : "false") + " witness " + w.quantity + "(" +
                std::to_string(w.p) + ")=" + std::to_string(w.value);
    if (w.holds || w.p != 2 || w.quantity != "kappa" || w.value != 6) o.pass = false;
    auto e = ld_empirical(fixtures::six_squares(), 10);
    o.detail += "; empirical (p,n)=(" + std::to_string(e.p) + "," + std::to_string(e.n) + ")";
    if (e.holds || e.p != 2 || e.n != 3) o.pass = false;
    return o;
}

Outcome c5() {
    Outcome o;
    for (const auto& q : {fixtures::six_squares(), fixtures::eight_squares()}) {
        auto b = varpi_bounds(q);
        LocalDensities L(q);
        Rational lo = L.varpi(1), hi = lo;
        for (i64 n = 1; n <= 10000; ++n) {
            Rational v = L.varpi(n);
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        if (lo < b.lower || hi > b.upper) o.pass = false;
        o.detail += q.name() + " [" + num(lo.get_d()) + "," + num(hi.get_d()) + "] in [" + str(b.lower) + "," +
                    str(b.upper) + "]; ";
        if (q.m() == 6 && (b.lower != Rational(1, 50) || b.upper != Rational(99, 50))) o.pass = false;
    }
    return o;
}

Outcome c6() {
    Outcome o;
    auto q = fixtures::e8();
    auto brute = e8_counts(50);
    auto table = rep_table(q, 50);
    SingularSeries S(q);
    double worst = 0;
    for (i64 n = 1; n <= 50; ++n) {
        if (brute[n] != table[n]) o.pass = false;
        double mt = r_main_term(S, n).value;
        worst = std::max(worst, std::fabs(mt - static_cast<double>(brute[n])) / static_cast<double>(brute[n]));
    }
    if (worst > 1e-6 || brute[1] != 240 || brute[2] != 2160) o.pass = false;
    o.detail = "max rel err " + num(worst) + "; r(1)=" + std::to_string(brute[1]) + " r(2)=" + std::to_string(brute[2]);
    return o;
}

Outcome c7() {
    Outcome o;
    for (const auto& q : fixtures::all()) {
        const i64 Bmax = q.m() == 4 ? 20 : 8;
        auto direct = n_star_direct_profile(q, Bmax);
        for (i64 B = 1; B <= Bmax; ++B)
            if (n_star(q, B) != direct[B]) {
                o.pass = false;
                o.detail += q.name() + " B=" + std::to_string(B) + "; ";
            }
    }
    auto four = fixtures::four_squares();
    i64 a = n_star(four, 1), b = n_star(four, 2);
    if (a != 16 || b != 64) o.pass = false;
    o.detail += "N*(1)=" + std::to_string(a) + " N*(2)=" + std::to_string(b);
    return o;
}

Outcome c8() {
    Outcome o;
    for (const auto& q : fixtures::all()) {
        if (q.m() != 4) continue;
        for (i64 T = 1; T <= 20; ++T) {
            i64 B = ipow(T, q.m() - 1);
            i64 r = n_rational(q, B), p = n_projective(q, B);
            if (r != 2 * p) {
                o.pass = false;
                o.detail += q.name() + " T=" + std::to_string(T) + "; ";
            }
        }
    }
    auto four = fixtures::four_squares();
    i64 r = n_rational(four, 8), p = n_projective(four, 8);
    if (r != 48 || p != 24) o.pass = false;
    o.detail += "T=2: (" + std::to_string(r) + "," + std::to_string(p) + ")";
    return o;
}

Outcome c9() {
    Outcome o;
    std::mt19937_64 rng(20240917);
    int checked = 0;
    double worst = 0;
    for (const auto& q : fixtures::all()) {
        GaussSums G(q);
        for (i64 c = 1; c <= 40; ++c) {
            std::uniform_int_distribution<i64> dd(0, c - 1), uu(0, c - 1);
            for (int t = 0; t < 100; ++t) {
                i64 d;
                do d = dd(rng); while (std::gcd(d, c) != 1);
                std::vector<i64> u(q.m());
                for (auto& x : u) x = uu(rng);
                auto g = G(c, d, u);
                ++checked;
                worst = std::max(worst, (std::abs(g.value.value) + g.value.error) / g.bound);
                if (!gauss_bound_holds(g)) o.pass = false;
            }
        }
    }
    o.detail = std::to_string(checked) + " sums; max |G|/bound " + num(worst);
    return o;
}

Outcome c10() {
    Outcome o;
    std::vector<i64> ns;
    for (i64 n = 1; n <= 10; ++n) ns.push_back(n);
    double worst40 = 0;
    std::string where;
    int nonmono = 0;
    for (const auto& q : fixtures::all()) {
        if (q.m() != 4) continue;
        SingularSeries S(q);
        auto reps = singular_series_csum(q, ns, 40);
        for (const auto& r : reps) {
            double closed = S(r.n).value.value;
            double prev = INFINITY;
            for (int C : {10, 20, 40}) {
                double e = std::fabs(r.partial[C - 1].get_d() - closed) / std::fabs(closed);
                if (e > prev) ++nonmono;
                prev = e;
                if (C == 40 && e > worst40) {
                    worst40 = e;
                    where = q.name() + " n=" + std::to_string(r.n);
                }
            }
        }
    }
    if (worst40 > 0.05 || nonmono) o.pass = false;
    o.detail = "max rel err at C=40 " + num(worst40) + " (" + where + "); non-monotone steps " + std::to_string(nonmono);
    return o;
}

Outcome c11() {
    Outcome o;
    auto r = verify_level_one(fixtures::e8(), 100000);
    if (!(r.discrepancy.value <= 1e-4) || !(r.series_gap <= r.series_tail)) o.pass = false;
    o.detail = "discrepancy " + num(r.discrepancy.value) + "; series gap " + num(r.series_gap) + " <= tail " + num(r.series_tail);
    return o;
}

Outcome c12() {
    Outcome o;
    for (int m : {4, 8}) {
        auto r = verify_sum_squares(m, 100000);
        Rational wa = m == 4 ? Rational(0) : Rational(8, 7), wb = m == 4 ? Rational(-3) : Rational(15, 7);
        if (!(r.discrepancy.value <= 1e-4) || r.a != wa || r.b != wb || !r.factors_ok || !(r.series_gap <= r.series_tail))
            o.pass = false;
        o.detail += "m=" + std::to_string(m) + " discrepancy " + num(r.discrepancy.value) + " (a,b)=(" + str(r.a) + "," +
                    str(r.b) + "); ";
    }
    return o;
}

Outcome c13() {
    Outcome o;
    for (const auto& q : fixtures::all()) {
        if (q.m() != 4 || !ld_condition(q).holds) continue;
        const double s = 2, w = q.k() + 1;
        double prev = INFINITY;
        o.detail += q.name() + ":";
        for (i64 N : {100, 1000, 10000}) {
            double d = dirichlet_check(q, s, w, N).discrepancy;
            o.detail += " " + num(d);
            if (d >= prev) o.pass = false;
            prev = d;
        }
        if (prev > 0.01) o.pass = false;
        o.detail += "; ";
    }
    return o;
}

Outcome c14() {
    Outcome o;
    auto q = fixtures::four_squares();
    auto lc = leading_constants(q, 100000);
    const double pred = lc.predicted_nstar_leading->value;
    const std::vector<i64> grid{50, 71, 100, 141, 200, 283, 400};
    std::vector<double> Bs, Ns;
    for (i64 B : grid) {
        Bs.push_back(static_cast<double>(B));
        Ns.push_back(static_cast<double>(n_star(q, B)));
    }
    auto fit = fit_leading(Bs, Ns, 4);
    auto ratio = [&](size_t i) {
        double L = std::log(Bs[i]);
        return Ns[i] / (pred * Bs[i] * Bs[i] * Bs[i] * L * L);
    };
    double r50 = ratio(0), r400 = ratio(grid.size() - 1);
    bool fit_ok = fit.c2 >= pred / 2 && fit.c2 <= 2 * pred;
    bool trend_ok = std::fabs(r400 - 1) < std::fabs(r50 - 1);
    o.pass = fit_ok && trend_ok;
    o.detail = "c2 " + num(fit.c2) + " vs predicted " + num(pred) + (fit_ok ? " (within 2x)" : " (outside 2x)") +
               "; ratio B=50 " + num(r50) + ", B=400 " + num(r400);
    return o;
}

const std::vector<std::function<Outcome()>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, c14};

bool run(int id) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = criteria[id - 1]();
    } catch (const std::exception& e) {
        o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    return o.pass;
}

} // namespace

int main(int argc, char** argv) {
    const int n = static_cast<int>(criteria.size());
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <1-%d|all>\n", n);
        return 2;
    }
    std::string a = argv[1];
    if (a == "all") {
        bool ok = true;
        for (int i = 1; i <= n; ++i) ok = run(i) && ok;
        return ok ? 0 : 1;
    }
    int id = std::atoi(a.c_str());
    if (id < 1 || id > n) {
        std::fprintf(stderr, "unknown criterion %s\n", a.c_str());
        return 2;
    }
    return run(id) ? 0 : 1;
}
