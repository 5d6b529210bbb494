// Runs the twelve acceptance checks and prints one PASS/FAIL line each.
// Exit status is 0 only when every check passes.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "joneslab/bracket.hpp"
#include "joneslab/cancellation.hpp"
#include "joneslab/errors.hpp"
#include "joneslab/ingest.hpp"
#include "joneslab/jones.hpp"
#include "joneslab/parallel.hpp"
#include "joneslab/ribbon.hpp"
#include "joneslab/states.hpp"
#include "support.hpp"

using namespace joneslab;

namespace {

int threads = 1;

struct Result {
    bool pass = true;
    std::string detail;
    std::vector<std::string> notes;  // printed under the result line
};

// Thread-safe collector of the first few failures.
struct Failures {
    std::mutex mu;
    std::size_t count = 0;
    std::vector<std::string> first;
    void add(const std::string& s) {
        std::lock_guard lock(mu);
        if (++count <= 5) first.push_back(s);
    }
    void into(Result& r) {
        if (count == 0) return;
        r.pass = false;
        r.detail += "; " + std::to_string(count) + " failure(s)";
        r.notes.insert(r.notes.end(), first.begin(), first.end());
    }
};

std::vector<TableEntry> searched() {
    static const auto s = search_small_nonadequate(4);
    return s;
}

// Shipped fixtures that are reduced and not A-adequate, optionally capped in size.
std::vector<TableEntry> nonadequate_fixtures(int max_c) {
    std::vector<TableEntry> out;
    for (auto& e : testing::fixtures())
        if (e.pd.crossing_count() <= max_c && e.pd.crossing_count() > 0 && is_reduced(e.pd) &&
            !is_A_adequate(e.pd).adequate)
            out.push_back(e);
    return out;
}

EngineOptions engine(int t) {
    EngineOptions o;
    o.threads = t;
    return o;
}

Result bracket_triangle() {
    std::vector<std::pair<std::string, Diagram>> corpus;
    for (auto& e : testing::fixtures()) corpus.emplace_back(e.name, e.pd);
    std::size_t generated = 0;
    for (int c = 1; c <= 6; ++c)
        for (auto& d : connected_diagrams(c)) corpus.emplace_back("c" + std::to_string(c), d), ++generated;
    auto braids = random_braid_closures(300, 12, 20240601);
    for (auto& d : braids) corpus.emplace_back("braid", d);
    Failures f;
    parallel_for(threads, static_cast<std::int64_t>(corpus.size()), [&](std::int64_t i) {
        const auto& [name, d] = corpus[i];
        LaurentPoly s = skein_bracket(d), g = subgraph_bracket(d), x = fast_bracket(d);
        if (!(s == g && g == x)) f.add(name + " " + render_pd(d));
    });
    Result r;
    r.detail = std::to_string(corpus.size()) + " diagrams (" + std::to_string(testing::fixtures().size()) +
               " fixtures, " + std::to_string(generated) + " generated with c <= 6, " +
               std::to_string(braids.size()) + " braid closures with c <= 12)";
    f.into(r);
    return r;
}

Result faces_lemma() {
    Failures f;
    std::size_t total = 0;
    for (auto& e : testing::fixtures()) {
        int c = e.pd.crossing_count();
        if (c > 8) continue;
        RibbonGraph rg(e.pd);
        total += std::size_t{1} << c;
        parallel_for(threads, std::int64_t{1} << c, [&](std::int64_t m) {
            SpanningSubgraph h = SpanningSubgraph::from_mask(c, static_cast<std::uint64_t>(m));
            int traced = testing::traced_faces(rg.all_A(), h);
            int circles = count_circles(e.pd, h.state());
            if (traced != circles || rg.faces(h) != circles)
                f.add(e.name + " mask " + std::to_string(m) + ": faces " + std::to_string(traced) + ", circles " +
                      std::to_string(circles));
        });
    }
    Result r;
    r.detail = std::to_string(total) + " spanning subgraphs of fixtures with c <= 8";
    f.into(r);
    return r;
}

Result binomial_suite() {
    Failures f;
    int cases = 0;
    for (int k = 0; k <= 8; ++k)
        for (int c = -6; c <= 6; ++c)
            for (int d = 0; d <= 6; ++d) {
                ++cases;
                testing::Terms oracle;
                for (int i = 0; i <= k; ++i) {
                    mpz_class b;
                    mpz_bin_uiui(b.get_mpz_t(), k, i);
                    oracle = testing::add(oracle, testing::mul({{c - 2 * i, b}},
                                                               testing::power(testing::delta_terms(), d + i)));
                }
                LaurentPoly p = binomial_cancellation(c, d, k);
                if (p != testing::to_poly(oracle) || (p.max_deg() && *p.max_deg() > c + 2 * d - 4 * k))
                    f.add("c=" + std::to_string(c) + " d=" + std::to_string(d) + " k=" + std::to_string(k));
            }
    Result r;
    r.detail = std::to_string(cases) + " (c, d, k) triples against direct expansion";
    f.into(r);
    return r;
}

Result adequate_sharpness() {
    Result r;
    std::ostringstream os;
    for (auto name : {"trefoil", "figure8"}) {
        const Diagram& d = testing::fixture(name);
        JonesCalculator jc(d, engine(threads));
        int M = max_bracket_degree_bound(d);
        auto deg = fast_bracket(d).max_deg();
        bool ok = deg && *deg == M;
        os << name << ": max_deg <D> = " << (deg ? std::to_string(*deg) : "none") << ", M = " << M;
        for (int m = 2; m <= 3; ++m) {
            DegreeReport rep = jc.degree_report(m);
            ok = ok && rep.d && *rep.d == rep.h;
            os << ", d(" << m << ") = " << (rep.d ? rep.d->to_string() : "none") << " h = " << rep.h.to_string();
        }
        os << "; ";
        r.pass = r.pass && ok;
    }
    r.detail = os.str();
    r.detail.resize(r.detail.size() - 2);
    return r;
}

Result degree_gap() {
    auto list = searched();
    for (auto& e : nonadequate_fixtures(4)) list.push_back(e);
    Failures f;
    parallel_for(threads, static_cast<std::int64_t>(list.size()), [&](std::int64_t i) {
        const auto& e = list[i];
        JonesCalculator jc(e.pd);
        DegreeReport rep = jc.degree_report(3);
        QSeries J = jc.colored_jones(3);
        if (!rep.d || rep.d->v < rep.h.v + 4 || J.coeff(rep.h) != 0)
            f.add(e.name + ": d(3) = " + (rep.d ? rep.d->to_string() : "none") + ", h_3 = " + rep.h.to_string());
    });
    Result r;
    r.detail = std::to_string(list.size()) + " reduced diagrams that are not A-adequate (" +
               std::to_string(searched().size()) + " searched with c <= 4), m = 3";
    f.into(r);
    return r;
}

Result cable_degree_drop() {
    std::vector<TableEntry> list{find_entry(testing::fixtures(), "fig7")};
    for (auto& e : searched()) list.push_back(e);
    Failures f;
    std::string fig7;
    std::mutex mu;
    parallel_for(threads, static_cast<std::int64_t>(list.size()), [&](std::int64_t i) {
        Diagram d3 = cable(list[i].pd, 3).diagram;
        int M = max_bracket_degree_bound(d3);
        auto deg = fast_bracket(d3).max_deg();
        if (!deg || *deg > M - 8) f.add(list[i].name + ": d* = " + (deg ? std::to_string(*deg) : "none"));
        if (i == 0) {
            std::lock_guard lock(mu);
            fig7 = "fig7: d*<D^3> = " + std::to_string(*deg) + " <= M(D^3) - 8 = " + std::to_string(M - 8);
        }
    });
    Result r;
    r.detail = fig7 + "; " + std::to_string(list.size() - 1) + " searched fixtures";
    f.into(r);
    return r;
}

struct Fig7Classes {
    CableLabeling L = label_cable(testing::fixture("fig7"), 3);
    std::vector<ClassDescriptor> classes = partition_classes(L);
};

const Fig7Classes& fig7_classes() {
    static const Fig7Classes c;
    return c;
}

Result class_machinery() {
    const auto& fc = fig7_classes();
    Result r;
    std::set<SpanningSubgraph> low;
    for (auto& h : enumerate_low_rank(fc.L.cable().diagram, 1)) low.insert(h);
    std::set<SpanningSubgraph> seen;
    std::size_t repeats = 0;
    for (auto& c : fc.classes)
        for (auto& h : c.members) repeats += !seen.insert(h).second;
    bool cover = repeats == 0 && seen == low;
    DegreeDropReport rep = verify_degree_drop(testing::fixture("fig7"), 3);
    r.pass = cover && rep.passed() && rep.face_failures == 0 && rep.lemma_failures == 0;
    std::ostringstream os;
    os << fc.classes.size() << " classes covering " << seen.size() << " of " << low.size()
       << " rank <= 1 subgraphs" << (repeats ? " with repeats" : " exactly once") << "; face increments "
       << (rep.face_failures ? "fail" : "exact") << "; |G|+v-k+g >= |a|-1 on " << rep.lemma_checked
       << " classes, " << rep.lemma_failures << " failures; class degrees <= " << rep.bound;
    r.detail = os.str();
    return r;
}

Result table_reproduction() {
    const auto& fc = fig7_classes();
    auto rows = realized_table_rows(fc.L, fc.classes);
    TableComparison cmp = compare_table(rows);
    Result r;
    r.pass = cmp.exact();
    r.detail = std::to_string(cmp.matched.size()) + " table rows matched, " + std::to_string(cmp.missing.size()) +
               " missing, " + std::to_string(cmp.extra.size()) + " realized rows not in the tables" +
               (cmp.reflected ? " (after L/R reflection)" : "");
    for (auto& row : cmp.missing) r.notes.push_back("missing: " + row.to_string());
    for (auto& row : cmp.extra) r.notes.push_back("extra:   " + row.to_string());
    return r;
}

Result last_coefficient_two() {
    JonesCalculator jc(testing::fixture("12n706"), engine(threads));
    QSeries J = jc.colored_jones(2);
    DegreeReport rep = jc.degree_report(2);
    Result r;
    auto lo = J.min_deg();
    r.pass = lo && *lo == Quarter{-16} && abs(J.coeff(*lo)) == 2;
    r.detail = "12n706: min degree of J(2) = " + (lo ? lo->to_string() : "none") + ", coefficient " +
               (lo ? J.coeff(*lo).get_str() : "0") + ", h_2 = " + rep.h.to_string();
    return r;
}

Result tail_stability() {
    Result r;
    std::ostringstream os;
    for (auto name : {"trefoil", "figure8"}) {
        JonesCalculator jc(testing::fixture(name), engine(threads));
        std::vector<std::vector<BigInt>> lead;
        for (int m = 3; m <= 4; ++m) {
            DegreeReport rep = jc.degree_report(m);
            QSeries J = jc.colored_jones(m);
            lead.emplace_back();
            for (int i = 0; i < 2; ++i) lead.back().push_back(J.coeff(Quarter{rep.d->v + 4L * i}));
        }
        bool ok = lead[0] == lead[1] && abs(lead[0][0]) == 1;
        TailReport t = jc.tail(2, 4);
        ok = ok && t.betas[0] == lead[0][0];
        os << name << ": " << lead[0][0].get_str() << ", " << lead[0][1].get_str() << " at m = 3 and "
           << lead[1][0].get_str() << ", " << lead[1][1].get_str() << " at m = 4; ";
        r.pass = r.pass && ok;
    }
    r.detail = os.str();
    r.detail.resize(r.detail.size() - 2);
    return r;
}

Result vanishing_tail() {
    std::vector<TableEntry> list = nonadequate_fixtures(12);
    for (auto& e : searched()) list.push_back(e);
    std::vector<TableEntry> adequate;
    for (auto& e : testing::fixtures())
        if (is_A_adequate(e.pd).adequate) adequate.push_back(e);
    Failures f;
    std::atomic<int> zero{0}, nonzero{0};
    std::vector<TableEntry> all = list;
    all.insert(all.end(), adequate.begin(), adequate.end());
    parallel_for(threads, static_cast<std::int64_t>(all.size()), [&](std::int64_t i) {
        const auto& e = all[i];
        bool want_zero = i < static_cast<std::int64_t>(list.size());
        TailReport t = tail(e.pd, 2, 4);
        if (want_zero && t.vanishes()) {
            ++zero;
        } else if (!want_zero && t.betas[0] != 0) {
            ++nonzero;
        } else {
            f.add(e.name + ": betas " + t.betas[0].get_str() + ", " + t.betas[1].get_str());
        }
    });
    Result r;
    r.detail = "two-term tail is 0 on " + std::to_string(zero) + " of " + std::to_string(list.size()) +
               " reduced non-A-adequate diagrams; beta_1 != 0 on " + std::to_string(nonzero) + " of " +
               std::to_string(adequate.size()) + " A-adequate fixtures";
    f.into(r);
    return r;
}

Result cable_combinatorics() {
    Failures f;
    int checks = 0;
    for (auto& e : testing::fixtures()) {
        const Diagram& d = e.pd;
        int c = d.crossing_count();
        int sA = count_circles(d, KauffmanState::all_A(c));
        int w = writhe(d);
        std::vector<int> M{-2, max_bracket_degree_bound(d)};  // M(D^0) = -2 for the empty cable
        for (int n = 2; n <= 4; ++n) {
            Diagram dn = cable(d, n).diagram;
            int cn = dn.crossing_count();
            int sn = count_circles(dn, KauffmanState::all_A(cn));
            M.push_back(cn + 2 * sn - 2);
            ++checks;
            bool ok = cn == n * n * c && sn == n * sA && writhe(dn) == n * n * w &&
                      M[n] == n * n * c + 2 * n * sA - 2;
            if (c > 0) ok = ok && M[n] - M[n - 2] > 4 * (n - 1);
            if (!ok) f.add(e.name + " n=" + std::to_string(n));
        }
    }
    Result r;
    r.detail = std::to_string(checks) + " (fixture, n) pairs, 2 <= n <= 4";
    f.into(r);
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::set<int> only;
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--only", only, "run only these check numbers")->check(CLI::Range(1, 12));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Result()>>> checks{
        {"bracket engines agree", bracket_triangle},
        {"faces equal state circles", faces_lemma},
        {"binomial cancellation bound", binomial_suite},
        {"sharp degrees for A-adequate diagrams", adequate_sharpness},
        {"d(3) >= h_3 + 1 without A-adequacy", degree_gap},
        {"d*<D^3> <= M(D^3) - 8", cable_degree_drop},
        {"class partition on the loop fixture", class_machinery},
        {"class table reproduction", table_reproduction},
        {"12n706 last coefficient", last_coefficient_two},
        {"tail stability", tail_stability},
        {"vanishing tail", vanishing_tail},
        {"cable combinatorics", cable_combinatorics},
    };
    int failed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        int number = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(number)) continue;
        auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = checks[i].second();
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("error: ") + ex.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !r.pass;
        char time[32];
        std::snprintf(time, sizeof time, "%.1f s", secs);
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << number << ". " << checks[i].first << ": " << r.detail
                  << " [" << time << "]\n";
        for (auto& n : r.notes) std::cout << "        " << n << "\n";
        std::cout.flush();
    }
    std::cout << failed << " of " << (only.empty() ? checks.size() : only.size()) << " checks failed\n";
    return failed ? 1 : 0;
}
