#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "joneslab/bracket.hpp"
#include "joneslab/cancellation.hpp"
#include "joneslab/errors.hpp"
#include "joneslab/ingest.hpp"
#include "joneslab/jones.hpp"
#include "joneslab/parallel.hpp"
#include "joneslab/states.hpp"

using namespace joneslab;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

struct UsageError : Error {
    using Error::Error;
};

struct Flags {
    std::string input;
    std::string name;
    std::string engine = "fast";
    std::string expansion;
    std::string report = "none";
    std::string store;
    int color = 2;
    int n = 3;
    int count = 2;
    int threads = 1;
    int naive_limit = 22;
    int frontier_cap = 20;
    int random = 0;
    std::uint64_t seed = 20240607;
    bool as_json = false;
    bool table = false;
};

struct Outcome {
    json j;
    std::string text;
    int code = exit_ok;
    std::string error;
};

Engine parse_engine(const std::string& s) {
    if (s == "skein") return Engine::Skein;
    if (s == "subgraph") return Engine::Subgraph;
    if (s == "fast") return Engine::Fast;
    throw UsageError("unknown engine '" + s + "' (skein, subgraph, fast)");
}

EngineOptions engine_options(const Flags& f, int threads) {
    EngineOptions o;
    o.engine = parse_engine(f.expansion.empty() ? f.engine : f.expansion);
    o.naive_limit = f.naive_limit;
    o.frontier_cap = f.frontier_cap;
    o.threads = threads;
    return o;
}

bool looks_like_pd(const std::string& s) {
    auto p = s.find_first_not_of(" \t");
    return p != std::string::npos && (s.compare(p, 3, "PD[") == 0 || s[p] == 'U');
}

// A literal PD code or a CSV table, narrowed by --name.
std::vector<TableEntry> inputs(const Flags& f) {
    if (looks_like_pd(f.input)) {
        try {
            return {TableEntry{f.name.empty() ? "input" : f.name, parse_pd(f.input), "argument", ""}};
        } catch (const SyntaxError& e) {
            throw UsageError(e.what());
        } catch (const ValidationError& e) {
            throw UsageError(e.what());
        }
    }
    LoadedTable t;
    try {
        t = load_table(f.input);
    } catch (const DuplicateName& e) {
        throw UsageError(e.what());
    }
    for (auto& e : t.errors) std::cerr << f.input << ":" << e.line << ": " << e.message << "\n";
    if (f.name.empty()) return t.entries;
    for (auto& e : t.entries)
        if (e.name == f.name) return {e};
    throw UsageError("no entry named '" + f.name + "' in " + f.input);
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string opt_int(const std::optional<int>& x) { return x ? std::to_string(*x) : "none"; }

json opt_json(const std::optional<int>& x) { return x ? json(*x) : json(nullptr); }

Outcome cmd_bracket(const TableEntry& e, const Flags& f, int threads) {
    auto opt = engine_options(f, threads);
    LaurentPoly p = bracket(e.pd, opt);
    Outcome o;
    o.j = {{"name", e.name},
           {"engine", f.expansion.empty() ? f.engine : f.expansion},
           {"bracket", p.to_json()},
           {"max_deg", opt_json(p.max_deg())},
           {"min_deg", opt_json(p.min_deg())},
           {"M", max_bracket_degree_bound(e.pd)}};
    o.text = p.to_string();
    return o;
}

Outcome cmd_jones(const TableEntry& e, const Flags& f, int threads) {
    if (f.color < 1) throw UsageError("--color must be at least 1");
    JonesCalculator jc(e.pd, engine_options(f, threads));
    QSeries J = jc.colored_jones(f.color);
    Outcome o;
    o.j = {{"name", e.name}, {"color", f.color}, {"polynomial", J.to_json()}, {"text", J.to_string()}};
    std::ostringstream out;
    out << J.to_string();
    bool degrees = f.report == "degrees" || f.report == "all";
    bool tail = f.report == "tail" || f.report == "all";
    if (!degrees && !tail && f.report != "none") throw UsageError("unknown report '" + f.report + "'");
    if (degrees) {
        if (f.color < 2) throw UsageError("degree reports need --color >= 2");
        DegreeReport r = jc.degree_report(f.color);
        o.j["degrees"] = r.to_json();
        out << "\nd(" << f.color << ") = " << (r.d ? r.d->to_string() : "none") << "\nh_" << f.color
            << "(D) = " << r.h.to_string() << "\nd*<S_" << f.color - 1 << "> = " << opt_int(r.dA_star) << "\nM(D^"
            << f.color - 1 << ") = " << r.M_Dn;
    }
    if (tail) {
        if (f.color < 3) throw UsageError("tail reports need --color >= 3");
        TailReport t = jc.tail(f.color - 2, f.color);
        o.j["tail"] = t.to_json();
        for (std::size_t i = 0; i < t.betas.size(); ++i) out << "\nbeta_" << i + 1 << " = " << t.betas[i].get_str();
    }
    o.text = out.str();
    return o;
}

Outcome cmd_adequacy(const TableEntry& e, const Flags&, int) {
    Adequacy a = is_A_adequate(e.pd);
    bool b = is_B_adequate(e.pd);
    bool red = is_reduced(e.pd);
    Outcome o;
    o.j = {{"name", e.name},         {"A_adequate", a.adequate}, {"B_adequate", b},
           {"reduced", red},         {"loops", a.loops},         {"witness", opt_json(a.witness)},
           {"crossings", e.pd.crossing_count()}};
    std::ostringstream out;
    out << "A-adequate: " << yes_no(a.adequate) << "\nB-adequate: " << yes_no(b) << "\nreduced: " << yes_no(red);
    if (!a.adequate) {
        out << "\nloop crossings:";
        for (int x : a.loops) out << " " << x;
    }
    o.text = out.str();
    return o;
}

Outcome cmd_cable(const TableEntry& e, const Flags& f, int) {
    if (f.n < 1) throw UsageError("--n must be positive");
    Cable cb = cable(e.pd, f.n);
    const Diagram& dn = cb.diagram;
    int s = count_circles(dn, KauffmanState::all_A(dn.crossing_count()));
    int M = max_bracket_degree_bound(dn);
    Outcome o;
    o.j = {{"name", e.name},
           {"n", f.n},
           {"crossings", dn.crossing_count()},
           {"s_A", s},
           {"writhe", writhe(dn)},
           {"M", M},
           {"diagram", diagram_to_json(dn)}};
    std::ostringstream out;
    out << "crossings: " << dn.crossing_count() << "\ns_A: " << s << "\nwrithe: " << writhe(dn) << "\nM: " << M
        << "\n" << render_pd(dn);
    o.text = out.str();
    return o;
}

std::string set_of(const CableLabeling& L, const std::vector<int>& xs) {
    std::string s = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + L.name(xs[i]);
    return s + "}";
}

Outcome cmd_classes(const TableEntry& e, const Flags& f, int) {
    if (f.n < 2) throw UsageError("--n must be at least 2");
    CableLabeling L = label_cable(e.pd, f.n);
    auto classes = partition_classes(L);
    Outcome o;
    std::ostringstream out;
    std::size_t total = 0;
    json list = json::array();
    for (auto& c : classes) total += c.size();
    out << "violating crossing: " << L.violating_crossing() << "\nclasses: " << classes.size()
        << "\nsubgraphs: " << total;
    o.j = {{"name", e.name},
           {"n", f.n},
           {"labeling", L.to_json()},
           {"class_count", classes.size()},
           {"subgraphs", total}};
    for (auto& c : classes) {
        const auto& s = c.base_stats;
        list.push_back({{"a", set_of(L, c.a)},
                        {"G", set_of(L, c.G)},
                        {"free", set_of(L, c.free_set)},
                        {"base", set_of(L, c.base.edges())},
                        {"size", c.size()},
                        {"rank", s.rank()},
                        {"genus", s.g}});
        if (!f.table)
            out << "\na=" << set_of(L, c.a) << " G=" << set_of(L, c.G) << " free=" << set_of(L, c.free_set)
                << " size=" << c.size() << " v-k=" << s.rank() << " g=" << s.g;
    }
    o.j["classes"] = list;
    if (f.table) {
        if (f.n != 3) throw UsageError("--table needs --n 3");
        TableComparison cmp = compare_table(realized_table_rows(L, classes));
        o.j["table"] = cmp.to_json();
        out << "\ntable rows matched: " << cmp.matched.size() << (cmp.reflected ? " (after L/R reflection)" : "");
        for (auto& r : cmp.missing) out << "\nmissing: " << r.to_string();
        for (auto& r : cmp.extra) out << "\nextra: " << r.to_string();
    }
    o.text = out.str();
    return o;
}

Outcome cmd_verify(const TableEntry& e, const Flags& f, int) {
    if (f.n < 2) throw UsageError("--n must be at least 2");
    Outcome o;
    try {
        DegreeDropReport r = verify_degree_drop(e.pd, f.n, f.frontier_cap);
        o.j = r.to_json();
        o.j["name"] = e.name;
        std::ostringstream out;
        out << "M(D^" << f.n << ") = " << r.M << "\nd*<D^" << f.n << "> = " << opt_int(r.bracket_degree);
        if (r.bracket_degree)
            out << "\nM(D^" << f.n << ") - d*<D^" << f.n << "> = " << r.M - *r.bracket_degree
                << (r.M - *r.bracket_degree >= 4 * (f.n - 1) ? " >= " : " < ") << 4 * (f.n - 1);
        out << "\nclasses: " << r.classes.size() << "\nsubgraphs: " << r.subgraphs
            << "\nface failures: " << r.face_failures << "\nrank+genus failures: " << r.rank_genus_failures
            << "\ninequality checks: " << r.lemma_checked << " (" << r.lemma_failures << " failed)"
            << "\npassed: " << yes_no(r.passed());
        o.text = out.str();
        o.code = r.passed() ? exit_ok : exit_failed;
    } catch (const BoundViolation& ex) {
        o.j = {{"name", e.name}, {"passed", false}, {"violation", ex.what()}};
        o.text = std::string("bound violated: ") + ex.what() + "\npassed: false";
        o.code = exit_failed;
    }
    return o;
}

Outcome cmd_tail(const TableEntry& e, const Flags& f, int threads) {
    if (f.count < 1) throw UsageError("--count must be positive");
    int top = std::max(f.color, f.count + 2);
    JonesCalculator jc(e.pd, engine_options(f, threads));
    Outcome o;
    try {
        TailReport t = jc.tail(f.count, top);
        o.j = t.to_json();
        o.j["name"] = e.name;
        o.j["max_color"] = top;
        o.j["vanishes"] = t.vanishes();
        std::ostringstream out;
        out << "A-adequate: " << yes_no(t.adequate);
        for (std::size_t i = 0; i < t.betas.size(); ++i) out << "\nbeta_" << i + 1 << " = " << t.betas[i].get_str();
        out << "\nJ^A_D truncated to " << f.count << " terms is " << (t.vanishes() ? "zero" : "nonzero");
        if (t.adequate) out << "\nconfirmed by two or more colors: " << t.stabilized_up_to;
        o.text = out.str();
    } catch (const StabilityViolation& ex) {
        o.j = {{"name", e.name}, {"violation", ex.what()}};
        o.text = std::string("tail unstable: ") + ex.what();
        o.code = exit_failed;
    }
    return o;
}

Outcome cmd_ingest_one(const TableEntry& e, const Flags& f, int threads, ResultStore& store) {
    JonesCalculator jc(e.pd, engine_options(f, threads));
    StoreRecord r;
    r.name = e.name;
    r.color = f.color;
    r.engine = f.engine;
    r.polynomial = jc.colored_jones(f.color).to_json();
    r.degree = f.color >= 2 ? jc.degree_report(f.color).to_json() : json(nullptr);
    r.version = std::string(library_version);
    Outcome o;
    try {
        bool added = store.put(r);
        o.text = (added ? "stored " : "unchanged ") + e.name;
        o.j = {{"name", e.name}, {"status", added ? "stored" : "unchanged"}};
    } catch (const StoreMismatch& ex) {
        o.text = "mismatch " + e.name + ": " + ex.what();
        o.j = {{"name", e.name}, {"status", "mismatch"}, {"error", ex.what()}};
        o.code = exit_failed;
    }
    return o;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

Outcome cmd_bench(const TableEntry& e, const Flags& f, int) {
    Outcome o;
    o.j = {{"name", e.name}, {"cables", json::array()}};
    std::ostringstream out;
    out << e.name;
    for (int k = 1; k <= f.n; ++k) {
        Diagram dk = cable(e.pd, k).diagram;
        json row = {{"n", k}, {"crossings", dk.crossing_count()}};
        out << "\n  n=" << k << " c=" << dk.crossing_count();
        auto t = std::chrono::steady_clock::now();
        try {
            fast_bracket(dk, f.frontier_cap);
            row["fast_seconds"] = seconds_since(t);
            row["peak_width"] = choose_order(dk).peak_width;
            out << " fast " << row["fast_seconds"].get<double>() << "s";
        } catch (const FrontierTooWide& ex) {
            row["fast_seconds"] = nullptr;
            out << " fast: " << ex.what();
        }
        if (dk.crossing_count() <= f.naive_limit) {
            t = std::chrono::steady_clock::now();
            skein_bracket(dk, f.naive_limit);
            row["skein_seconds"] = seconds_since(t);
            t = std::chrono::steady_clock::now();
            subgraph_bracket(dk, f.naive_limit);
            row["subgraph_seconds"] = seconds_since(t);
            out << " skein " << row["skein_seconds"].get<double>() << "s subgraph "
                << row["subgraph_seconds"].get<double>() << "s";
        }
        o.j["cables"].push_back(row);
    }
    o.text = out.str();
    return o;
}

template <class Fn>
int run_each(const std::vector<TableEntry>& entries, const Flags& f, Fn fn) {
    std::vector<Outcome> res(entries.size());
    // With several entries the workers go to entries; a single entry gets them all.
    int outer = entries.size() > 1 ? f.threads : 1;
    int inner = entries.size() > 1 ? 1 : f.threads;
    parallel_for(outer, static_cast<std::int64_t>(entries.size()), [&](std::int64_t i) {
        try {
            res[i] = fn(entries[i], f, inner);
        } catch (const UsageError&) {
            throw;
        } catch (const TooLarge& ex) {
            res[i] = Outcome{json(), "", exit_usage, ex.what()};
        } catch (const FrontierTooWide& ex) {
            res[i] = Outcome{json(), "", exit_usage, ex.what()};
        } catch (const InvalidN& ex) {
            res[i] = Outcome{json(), "", exit_usage, ex.what()};
        } catch (const NotApplicable& ex) {
            res[i] = Outcome{json(), "", exit_usage, ex.what()};
        } catch (const ValidationError& ex) {
            res[i] = Outcome{json(), "", exit_usage, ex.what()};
        } catch (const Error& ex) {
            res[i] = Outcome{json(), "", exit_failed, ex.what()};
        }
    });
    int code = exit_ok;
    json all = json::array();
    bool many = entries.size() > 1;
    for (std::size_t i = 0; i < res.size(); ++i) {
        auto& r = res[i];
        if (!r.error.empty()) std::cerr << entries[i].name << ": " << r.error << "\n";
        code = std::max(code, r.code);
        if (!r.error.empty()) continue;
        if (f.as_json) {
            all.push_back(r.j);
        } else if (many) {
            std::cout << entries[i].name << ":\n";
            std::istringstream lines(r.text);
            for (std::string line; std::getline(lines, line);) std::cout << "  " << line << "\n";
        } else {
            std::cout << r.text << "\n";
        }
    }
    if (f.as_json) std::cout << (many ? all : all.empty() ? json(nullptr) : all[0]).dump(2) << "\n";
    return code;
}

void add_common(CLI::App* c, Flags& f) {
    c->add_option("input", f.input, "CSV table (name,pd_code,notes) or a literal PD code")->required();
    c->add_option("--name", f.name, "table entry to use; all entries when omitted");
    c->add_flag("--json", f.as_json, "machine-readable output");
    c->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
    c->add_option("--naive-limit", f.naive_limit, "largest crossing count for exponential engines");
    c->add_option("--frontier-cap", f.frontier_cap, "largest frontier width for the fast engine");
}

void add_engine(CLI::App* c, Flags& f) {
    c->add_option("--engine", f.engine, "skein, subgraph or fast");
    c->add_option("--expansion", f.expansion, "same as --engine; 'subgraph' sums over spanning subgraphs");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kauffman brackets, colored Jones polynomials and degree-bound checks for link diagrams"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(library_version));
    Flags f;

    auto* bracket_cmd = app.add_subcommand("bracket", "Kauffman bracket <D>, normalized so <unknot> = 1");
    add_common(bracket_cmd, f);
    add_engine(bracket_cmd, f);

    auto* jones_cmd = app.add_subcommand("jones", "colored Jones polynomial J(m, q) with q = A^-4");
    add_common(jones_cmd, f);
    add_engine(jones_cmd, f);
    jones_cmd->add_option("--color", f.color, "color m (m = 2 is the Jones polynomial)");
    jones_cmd->add_option("--report", f.report, "none, degrees, tail or all");

    auto* adequacy_cmd = app.add_subcommand("adequacy", "A/B-adequacy, reducedness and loop crossings");
    add_common(adequacy_cmd, f);

    auto* cable_cmd = app.add_subcommand("cable", "blackboard n-cable and its all-A data");
    add_common(cable_cmd, f);
    cable_cmd->add_option("--n", f.n, "number of parallel copies");

    auto* classes_cmd = app.add_subcommand("classes", "equivalence classes of low-rank spanning subgraphs of D^n");
    add_common(classes_cmd, f);
    classes_cmd->add_option("--n", f.n, "cable index");
    classes_cmd->add_flag("--table", f.table, "compare the n = 3 class rows with the published tables");

    auto* verify_cmd = app.add_subcommand("verify", "check the degree drop d*<D^n> <= M(D^n) - 4(n-1) class by class");
    add_common(verify_cmd, f);
    verify_cmd->add_option("--n", f.n, "cable index");

    auto* tail_cmd = app.add_subcommand(
        "tail", "tail coefficients beta_i and J^A_D(q) of one diagram; invariance over all diagrams of the link is "
                "not certified");
    add_common(tail_cmd, f);
    add_engine(tail_cmd, f);
    tail_cmd->add_option("--count", f.count, "number of tail coefficients");
    tail_cmd->add_option("--color", f.color, "largest color used (at least count + 2)");

    auto* ingest_cmd = app.add_subcommand("ingest", "compute J(m, q) for every table row and record it in the store");
    add_common(ingest_cmd, f);
    add_engine(ingest_cmd, f);
    ingest_cmd->add_option("--color", f.color, "color m");
    ingest_cmd->add_option("--store", f.store, "NDJSON store; defaults to $JONESLAB_STORE or joneslab-store.ndjson");

    auto* bench_cmd = app.add_subcommand("bench", "time the bracket engines on cables D^1 .. D^n");
    bench_cmd->add_option("input", f.input, "CSV table or literal PD code; random braid closures when omitted");
    bench_cmd->add_option("--name", f.name, "table entry to use");
    bench_cmd->add_flag("--json", f.as_json, "machine-readable output");
    bench_cmd->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--naive-limit", f.naive_limit, "largest crossing count for exponential engines");
    bench_cmd->add_option("--frontier-cap", f.frontier_cap, "largest frontier width for the fast engine");
    bench_cmd->add_option("--n", f.n, "largest cable index")->default_val(2);
    bench_cmd->add_option("--random", f.random, "number of random braid closures")->default_val(5);
    bench_cmd->add_option("--seed", f.seed, "seed for random braid closures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (bracket_cmd->parsed()) return run_each(inputs(f), f, cmd_bracket);
        if (jones_cmd->parsed()) return run_each(inputs(f), f, cmd_jones);
        if (adequacy_cmd->parsed()) return run_each(inputs(f), f, cmd_adequacy);
        if (cable_cmd->parsed()) return run_each(inputs(f), f, cmd_cable);
        if (classes_cmd->parsed()) return run_each(inputs(f), f, cmd_classes);
        if (verify_cmd->parsed()) return run_each(inputs(f), f, cmd_verify);
        if (tail_cmd->parsed()) return run_each(inputs(f), f, cmd_tail);
        if (ingest_cmd->parsed()) {
            LoadedTable t = load_table(f.input);
            for (auto& e : t.errors) std::cerr << f.input << ":" << e.line << ": " << e.message << "\n";
            ResultStore store(f.store.empty() ? ResultStore::default_path() : f.store);
            Flags g = f;
            g.threads = 1;
            int code = run_each(t.entries, g, [&](const TableEntry& e, const Flags& fl, int th) {
                return cmd_ingest_one(e, fl, th, store);
            });
            return t.errors.empty() ? code : std::max(code, exit_failed);
        }
        if (bench_cmd->parsed()) {
            std::vector<TableEntry> entries;
            if (!f.input.empty()) {
                entries = inputs(f);
            } else {
                int i = 0;
                for (auto& d : random_braid_closures(f.random, 8, f.seed))
                    entries.push_back({"braid-" + std::to_string(i++), d, "generated", ""});
            }
            return run_each(entries, f, cmd_bench);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DuplicateName& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::system_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_failed;
    }
    return exit_usage;
}
