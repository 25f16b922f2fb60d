#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

#include "qfcount/qfcount.hpp"

using namespace qfc;
using json = nlohmann::ordered_json;

namespace {

struct RunConfig {
    std::string form;
    i64 prime = 0;
    i64 n = 0;
    i64 height = 0;
    std::string height_range;
    i64 cutoff = 100000;
    bool oracle = false;
    int threads = 1;
    std::string out;
    std::string format = "json";
    std::string suite = "all";
    std::string mode = "all";
};

struct VerifyFailure {
    json detail;
};

std::string frac(const Rational& r) { return to_string(r); }

json numeric(const std::string& name, const BoundedNumeric& v, i64 cutoff = 0) {
    json j = {{"name", name}, {"value", v.value}, {"error_bound", v.error}};
    if (cutoff) j["cutoff"] = cutoff;
    return j;
}

std::vector<QuadraticForm> forms_for(const RunConfig& cfg) {
    if (cfg.form.empty()) return fixtures::all();
    return {load_form(cfg.form)};
}

json jordan_json(LocalDensities& L, i64 p) {
    json j;
    if (p == 2) {
        const auto& J = L.two();
        j["verified"] = verify_equivalence(L.form(), J);
        j["diagonal"] = json::array();
        for (const auto& d : J.diag) j["diagonal"].push_back({{"alpha", d.alpha}, {"eps", d.eps}});
        j["hyperbolic"] = json::array();
        for (const auto& t : J.type2) j["hyperbolic"].push_back({{"beta", t.scale}, {"eps", t.eps}});
        j["plus_type"] = json::array();
        for (const auto& t : J.type3) j["plus_type"].push_back({{"gamma", t.scale}, {"eps", t.eps}});
    } else {
        const auto& J = L.odd(p);
        j["verified"] = verify_equivalence(L.form(), J);
        j["blocks"] = json::array();
        for (const auto& b : J.blocks) j["blocks"].push_back({{"alpha", b.alpha}, {"eps", b.eps}});
    }
    return j;
}

json witness_json(const LdWitness& w) {
    json j = {{"holds", w.holds}};
    if (!w.holds) j["witness"] = {{"p", w.p}, {"r", w.r}, {"quantity", w.quantity}, {"value", w.value}};
    return j;
}

json cmd_analyze(const RunConfig& cfg) {
    json all = json::array();
    for (const auto& q : forms_for(cfg)) {
        LocalDensities L(q);
        const auto& inv = q.invariants();
        json j = {{"name", q.name()},
                  {"m", q.m()},
                  {"det_A", inv.det_A.get_str()},
                  {"D", inv.D.get_str()},
                  {"norm", inv.norm},
                  {"level", inv.level}};
        json jd;
        for (i64 p : L.bad()) jd[std::to_string(p)] = jordan_json(L, p);
        j["jordan"] = jd;
        j["locally_determined"] = witness_json(L.ld_condition());
        all.push_back(j);
    }
    return all.size() == 1 ? all[0] : all;
}

json cmd_density(const RunConfig& cfg) {
    if (cfg.prime < 2 || cfg.n < 1) fail(ErrorKind::InvalidArgument, "density needs --prime and --n");
    auto q = load_form(cfg.form.empty() ? "builtin:sum_of_4_squares" : cfg.form);
    LocalDensities L(q);
    Rational v = L.delta(cfg.prime, cfg.n);
    json j = {{"form", q.name()}, {"p", cfg.prime}, {"n", cfg.n}, {"branch", is_bad_prime(q, cfg.prime) ? "bad" : "good"}, {"value", frac(v)}};
    if (cfg.oracle) {
        auto o = L.oracle(cfg.prime, cfg.n);
        j["oracle"] = frac(o.density);
        j["oracle_nu"] = o.nu;
        j["oracle_engine"] = o.engine;
        j["match"] = o.density == v;
    }
    return j;
}

json report_json(const CountReport& r) {
    json j = {{"B", r.B}, {"n_star", r.n_star}};
    if (r.n_star_direct) j["n_star_direct"] = *r.n_star_direct;
    j["n_rational"] = r.n_rational;
    j["n_projective"] = r.n_projective;
    j["consistent"] = r.consistent;
    return j;
}

json cmd_count(const RunConfig& cfg) {
    if (cfg.height < 0) fail(ErrorKind::InvalidArgument, "count needs --height");
    auto q = load_form(cfg.form.empty() ? "builtin:sum_of_4_squares" : cfg.form);
    const i64 B = cfg.height;
    json j = {{"form", q.name()}, {"B", B}};
    if (cfg.mode == "star") {
        j["n_star"] = n_star(q, B, cfg.threads);
    } else if (cfg.mode == "direct") {
        j["n_star_direct"] = n_star_direct(q, B);
    } else if (cfg.mode == "rational") {
        j["n_rational"] = n_rational(q, ipow(B, q.m() - 1), cfg.threads);
    } else if (cfg.mode == "projective") {
        j["n_projective"] = n_projective(q, ipow(B, q.m() - 1));
    } else if (cfg.mode == "all") {
        j = report_json(count_report(q, B, true, cfg.threads));
        j["form"] = q.name();
    } else {
        fail(ErrorKind::InvalidArgument, "unknown --mode " + cfg.mode);
    }
    return j;
}

json cmd_constants(const RunConfig& cfg) {
    json all = json::array();
    for (const auto& q : forms_for(cfg)) {
        const int m = q.m();
        auto lc = leading_constants(q, cfg.cutoff);
        json list = json::array();
        list.push_back(numeric("zeta(m-1)", zeta(m - 1.0)));
        list.push_back(numeric("L(m/2,chi)", l_chi(m / 2.0, q)));
        list.push_back(numeric("L(3m/2-2,chi)", l_chi(1.5 * m - 2, q)));
        list.push_back(numeric("calC_star", lc.calC_star));
        list.push_back(numeric("calC", lc.calC));
        list.push_back(numeric("calC_prime_star", lc.calC_prime_star));
        list.push_back(numeric("calC_prime", lc.calC_prime));
        list.push_back(numeric("frakC_W", frakC_W(q, cfg.cutoff).result, cfg.cutoff));
        if (lc.frakC_Q) list.push_back(numeric("frakC_Q", *lc.frakC_Q, cfg.cutoff));
        if (lc.predicted_nstar_leading) list.push_back(numeric("predicted_nstar_leading", *lc.predicted_nstar_leading, cfg.cutoff));
        all.push_back({{"form", q.name()}, {"constants", list}});
    }
    return all.size() == 1 ? all[0] : all;
}

void check(bool ok, json detail) {
    if (!ok) throw VerifyFailure{std::move(detail)};
}

json suite_calibration(const RunConfig& cfg) {
    const i64 nmax = cfg.n > 0 ? cfg.n : 60;
    json summary = json::array();
    for (const auto& q : forms_for(cfg)) {
        LocalDensities L(q);
        i64 checked = 0;
        for (i64 p : L.bad())
            for (i64 n = 1; n <= nmax; ++n) {
                Rational a = L.delta_bad(p, n), o = L.oracle(p, n).density;
                check(a == o, {{"form", q.name()}, {"check", "delta_bad"}, {"p", p}, {"n", n}, {"formula", frac(a)}, {"oracle", frac(o)}});
                ++checked;
            }
        for (i64 p : {3, 5, 7}) {
            if (is_bad_prime(q, p)) continue;
            for (i64 n = 1; n <= std::min<i64>(nmax, 50); ++n) {
                Rational a = delta_good(q, p, valuation(n, p).nu), o = L.oracle(p, n).density;
                check(a == o, {{"form", q.name()}, {"check", "delta_good"}, {"p", p}, {"n", n}, {"formula", frac(a)}, {"oracle", frac(o)}});
                ++checked;
            }
        }
        // exponent conventions of v_r at odd primes up to 7
        json conv = json::object();
        for (auto c : {VrConvention::Calibrated, VrConvention::Literal, VrConvention::PerElement}) {
            i64 agree = 0, disagree = 0, nonrational = 0;
            for (i64 p : {3, 5, 7}) {
                auto J = jordan_odd(q, p);
                for (i64 n = 1; n <= std::min<i64>(nmax, 30); ++n) {
                    Rational o = L.oracle(p, n).density;
                    try {
                        (delta_yang_odd(J, n, c) == o ? agree : disagree)++;
                    } catch (const Error&) {
                        ++nonrational;
                    }
                }
            }
            conv[convention_name(c)] = {{"agree", agree}, {"disagree", disagree}, {"non_rational", nonrational}};
            if (c == VrConvention::Calibrated)
                check(disagree == 0 && nonrational == 0, {{"form", q.name()}, {"check", "v_r calibration"}, {"counts", conv}});
        }
        summary.push_back({{"form", q.name()}, {"checked", checked}, {"v_r_conventions", conv}});
    }
    return summary;
}

json suite_identities(const RunConfig& cfg) {
    json out = json::array();
    const double tol = 1e-4;
    bool any = false;
    for (const auto& q : forms_for(cfg)) {
        if (q.invariants().level == 1) {
            auto r = verify_level_one(q, cfg.cutoff);
            json j = {{"check", "level_one"}, {"form", q.name()}, {"discrepancy", r.discrepancy.value}, {"bound", r.discrepancy.error},
                      {"series_gap", r.series_gap}, {"series_tail", r.series_tail}};
            check(r.discrepancy.hi() <= tol && r.series_gap <= r.series_tail, j);
            out.push_back(j);
            any = true;
        }
        LocalDensities L(q);
        if (q.m() == 4 && L.ld_condition().holds) {
            json j = {{"check", "dirichlet"}, {"form", q.name()}};
            double prev = INFINITY;
            for (i64 N : {100, 1000, 10000}) {
                auto d = dirichlet_check(q, 2, q.k() + 1, N);
                j["N=" + std::to_string(N)] = d.discrepancy;
                check(d.discrepancy < prev, j);
                prev = d.discrepancy;
            }
            check(prev <= 0.01, j);
            out.push_back(j);
            any = true;
        }
    }
    for (int m : {4, 8}) {
        bool relevant = cfg.form.empty();
        for (const auto& q : forms_for(cfg)) relevant |= q.name() == "sum_of_" + std::to_string(m) + "_squares";
        if (!relevant) continue;
        auto r = verify_sum_squares(m, cfg.cutoff);
        json j = {{"check", "sum_squares"}, {"m", m}, {"a", frac(r.a)}, {"b", frac(r.b)}, {"discrepancy", r.discrepancy.value},
                  {"bound", r.discrepancy.error}, {"series_gap", r.series_gap}, {"factors_ok", r.factors_ok}};
        check(r.discrepancy.hi() <= tol && r.series_gap <= r.series_tail + 1e-15 && r.factors_ok, j);
        out.push_back(j);
        any = true;
    }
    if (!any) out.push_back({{"note", "no identity applies to this form"}});
    return out;
}

json suite_bounds(const RunConfig& cfg) {
    json out = json::array();
    std::mt19937_64 rng(20240601);
    const i64 nmax = cfg.n > 0 ? cfg.n : 1000;
    for (const auto& q : forms_for(cfg)) {
        if (q.m() >= 6) {
            try {
                auto b = varpi_bounds(q);
                LocalDensities L(q);
                for (i64 n = 1; n <= nmax; ++n) {
                    Rational v = L.varpi(n);
                    check(b.lower <= v && v <= b.upper, {{"form", q.name()}, {"check", "varpi"}, {"n", n}, {"varpi", frac(v)},
                                                          {"lower", frac(b.lower)}, {"upper", frac(b.upper)}});
                }
                out.push_back({{"form", q.name()}, {"check", "varpi"}, {"lower", frac(b.lower)}, {"upper", frac(b.upper)}, {"n_max", nmax}});
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::AssumptionViolated) throw;
                out.push_back({{"form", q.name()}, {"check", "varpi"}, {"skipped", e.what()}});
            }
        }
        GaussSums G(q);
        const int m = q.m();
        i64 count = 0;
        for (i64 c = 1; c <= 40; ++c)
            for (int t = 0; t < 20; ++t) {
                i64 d;
                do d = static_cast<i64>(rng() % static_cast<u64>(c)) + 1;
                while (std::gcd(c, d) != 1);
                std::vector<i64> u(m);
                for (auto& x : u) x = static_cast<i64>(rng() % static_cast<u64>(c));
                auto g = G(c, d, u);
                check(gauss_bound_holds(g), {{"form", q.name()}, {"check", "gauss"}, {"c", c}, {"d", d}, {"abs", std::abs(g.value.value)}, {"bound", g.bound}});
                ++count;
            }
        out.push_back({{"form", q.name()}, {"check", "gauss"}, {"sums", count}});
    }
    return out;
}

json suite_counting(const RunConfig& cfg) {
    json out = json::array();
    for (const auto& q : forms_for(cfg)) {
        const i64 Bmax = cfg.height > 0 ? cfg.height : (q.m() == 4 ? 10 : 3);
        auto prof = n_star_direct_profile(q, Bmax);
        for (i64 B = 1; B <= Bmax; ++B) {
            i64 a = n_star(q, B, cfg.threads);
            check(a == prof[B], {{"form", q.name()}, {"check", "n_star"}, {"B", B}, {"n_star", a}, {"n_star_direct", prof[B]}});
            i64 Bp = ipow(B, q.m() - 1);
            i64 r = n_rational(q, Bp, cfg.threads), s = n_projective(q, Bp);
            check(r == 2 * s, {{"form", q.name()}, {"check", "moebius"}, {"T", B}, {"n_rational", r}, {"n_projective", s}});
        }
        out.push_back({{"form", q.name()}, {"B_max", Bmax}, {"n_star", prof[Bmax]}});
    }
    return out;
}

int cmd_verify(const RunConfig& cfg, std::ostream& os) {
    json report;
    try {
        auto run = [&](const std::string& s) {
            if (s == "calibration") report[s] = suite_calibration(cfg);
            else if (s == "identities") report[s] = suite_identities(cfg);
            else if (s == "bounds") report[s] = suite_bounds(cfg);
            else if (s == "counting") report[s] = suite_counting(cfg);
            else fail(ErrorKind::InvalidArgument, "unknown suite " + s);
        };
        if (cfg.suite == "all")
            for (const char* s : {"calibration", "identities", "bounds", "counting"}) run(s);
        else
            run(cfg.suite);
    } catch (const VerifyFailure& f) {
        os << json{{"status", "fail"}, {"first_failure", f.detail}}.dump(2) << "\n";
        return 1;
    }
    report["status"] = "pass";
    os << report.dump(2) << "\n";
    return 0;
}

struct Range {
    i64 a, b, step;
};

Range parse_range(const std::string& s) {
    Range r{};
    char c1 = 0, c2 = 0;
    std::istringstream in(s);
    if (!(in >> r.a >> c1 >> r.b >> c2 >> r.step) || c1 != ':' || c2 != ':' || r.a < 1 || r.b < r.a || r.step < 1)
        fail(ErrorKind::InvalidArgument, "--height-range must be A:B:STEP with 1 <= A <= B, STEP >= 1");
    return r;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& os) {
    auto q = load_form(cfg.form.empty() ? "builtin:sum_of_4_squares" : cfg.form);
    std::vector<i64> Bs;
    if (!cfg.height_range.empty()) {
        auto r = parse_range(cfg.height_range);
        for (i64 B = r.a; B <= r.b; B += r.step) Bs.push_back(B);
    } else if (cfg.height > 0) {
        Bs.push_back(cfg.height);
    } else {
        fail(ErrorKind::InvalidArgument, "sweep needs --height-range or --height");
    }
    struct Row {
        i64 n_star, n_rational;
        std::optional<i64> n_projective;
    };
    auto cell = [&](i64 B) {
        Row r{n_star(q, B), n_rational(q, ipow(B, q.m() - 1)), std::nullopt};
        try {
            // the projective census is a full enumeration; skipped when too large
            if (detail::ellipsoid_volume(q.m(), q.invariants().det_A.get_d(), static_cast<double>(B * B)) <= 1e9)
                r.n_projective = n_projective(q, ipow(B, q.m() - 1));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ResourceLimit) throw;
        }
        return r;
    };
    const bool csv = cfg.format == "csv";
    json rows = json::array();
    if (csv) os << "B,n_star,n_rational,n_projective,fit_c2\n" << std::flush;
    std::vector<double> fb, fn;
    const size_t T = static_cast<size_t>(std::max(1, cfg.threads));
    for (size_t start = 0; start < Bs.size(); start += T) {
        std::vector<std::future<Row>> jobs;
        for (size_t i = start; i < std::min(Bs.size(), start + T); ++i) jobs.push_back(std::async(std::launch::async, cell, Bs[i]));
        for (size_t i = 0; i < jobs.size(); ++i) {
            const i64 B = Bs[start + i];
            Row r = jobs[i].get();
            std::string fit;
            if (B > 1) {
                fb.push_back(static_cast<double>(B));
                fn.push_back(static_cast<double>(r.n_star));
            }
            if (fb.size() >= 6) {
                std::ostringstream ss;
                ss.precision(10);
                ss << fit_leading(fb, fn, q.m()).c2;
                fit = ss.str();
            }
            if (csv) {
                os << B << "," << r.n_star << "," << r.n_rational << "," << (r.n_projective ? std::to_string(*r.n_projective) : "") << ","
                   << fit << "\n" << std::flush;
            } else {
                json j = {{"B", B}, {"n_star", r.n_star}, {"n_rational", r.n_rational}};
                j["n_projective"] = r.n_projective ? json(*r.n_projective) : json(nullptr);
                j["fit_c2"] = fit.empty() ? json(nullptr) : json(std::stod(fit));
                rows.push_back(j);
            }
        }
    }
    if (!csv) os << json{{"form", q.name()}, {"rows", rows}}.dump(2) << "\n";
    return 0;
}

void emit(const json& j, const RunConfig& cfg, std::ostream& os) {
    if (cfg.format == "csv") {
        // flat objects only: one header line, one value line
        const json& row = j.is_array() && !j.empty() ? j[0] : j;
        std::string head, vals;
        for (auto it = row.begin(); it != row.end(); ++it) {
            if (it->is_structured()) continue;
            head += (head.empty() ? "" : ",") + it.key();
            vals += (vals.empty() ? "" : ",") + (it->is_string() ? it->get<std::string>() : it->dump());
        }
        os << head << "\n" << vals << "\n";
    } else {
        os << j.dump(2) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local densities, singular series and point counts for x^3 = Q(y) z"};
    app.require_subcommand(1);
    RunConfig cfg;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--form", cfg.form, "form file (JSON) or builtin:<name>");
        sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out, "output path (default stdout)");
        sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };
    auto* analyze = app.add_subcommand("analyze", "invariants, Jordan data and the locally-determined test");
    common(analyze);
    auto* density = app.add_subcommand("density", "exact local density delta_p(n, Q)");
    common(density);
    density->add_option("--prime", cfg.prime, "prime p")->required()->check(CLI::PositiveNumber);
    density->add_option("--n", cfg.n, "positive integer n")->required()->check(CLI::PositiveNumber);
    density->add_flag("--oracle", cfg.oracle, "also count solutions mod p^nu");
    auto* count = app.add_subcommand("count", "point counts N*(B), N(B^(m-1))");
    common(count);
    count->add_option("--height", cfg.height, "affine height bound B")->required()->check(CLI::NonNegativeNumber);
    count->add_option("--mode", cfg.mode, "star, direct, rational, projective or all")
        ->check(CLI::IsMember({"star", "direct", "rational", "projective", "all"}));
    auto* constants = app.add_subcommand("constants", "L-values, Euler products and leading constants");
    common(constants);
    constants->add_option("--cutoff", cfg.cutoff, "Euler product prime cutoff P")->check(CLI::Range(i64(3), i64(100000000)));
    auto* verify = app.add_subcommand("verify", "run verification suites; exit 1 on the first failure");
    common(verify);
    verify->add_option("--suite", cfg.suite, "calibration, identities, bounds, counting or all")
        ->check(CLI::IsMember({"calibration", "identities", "bounds", "counting", "all"}));
    verify->add_option("--cutoff", cfg.cutoff, "Euler product prime cutoff P")->check(CLI::Range(i64(3), i64(100000000)));
    verify->add_option("--n", cfg.n, "largest n for density and varpi checks")->check(CLI::PositiveNumber);
    verify->add_option("--height", cfg.height, "largest B for counting checks")->check(CLI::PositiveNumber);
    auto* sweep = app.add_subcommand("sweep", "count over a range of heights, streaming rows");
    common(sweep);
    sweep->add_option("--height-range", cfg.height_range, "A:B:STEP");
    sweep->add_option("--height", cfg.height, "single height")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file) {
            std::cerr << "error: cannot open " << cfg.out << "\n";
            return 2;
        }
    }
    std::ostream& os = cfg.out.empty() ? std::cout : file;
    try {
        if (*analyze) emit(cmd_analyze(cfg), cfg, os);
        else if (*density) emit(cmd_density(cfg), cfg, os);
        else if (*count) emit(cmd_count(cfg), cfg, os);
        else if (*constants) emit(cmd_constants(cfg), cfg, os);
        else if (*verify) return cmd_verify(cfg, os);
        else if (*sweep) return cmd_sweep(cfg, os);
    } catch (const Error& e) {
        std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
        return e.kind() == ErrorKind::ResourceLimit ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
