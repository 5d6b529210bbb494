#include "joneslab/bracket.hpp"

#include <array>
#include <string>
#include <unordered_map>

#include "joneslab/errors.hpp"
#include "joneslab/ribbon.hpp"

namespace joneslab {

namespace {

// Smoothing pairs: A joins (0,1),(2,3); B joins (1,2),(3,0).
constexpr std::array<std::array<std::array<int, 2>, 2>, 2> kPairs{{{{{0, 1}, {2, 3}}}, {{{1, 2}, {3, 0}}}}};

std::vector<int> arc_partners(const Diagram& d) {
    std::vector<int> p(4 * d.crossing_count());
    for (int x = 0; x < d.crossing_count(); ++x)
        for (int s = 0; s < 4; ++s) {
            ArcEnd o = d.across(x, s);
            p[4 * x + s] = 4 * o.crossing + o.slot;
        }
    return p;
}

LaurentPoly normalize(LaurentPoly p, int unknots) {
    if (unknots >= 1) return p * LaurentPoly::delta().pow(unknots - 1);
    return exact_div(p, LaurentPoly::delta());
}

}  // namespace

LaurentPoly skein_bracket(const Diagram& d, int naive_limit) {
    int c = d.crossing_count();
    if (c > naive_limit) throw TooLarge("skein recursion limited to " + std::to_string(naive_limit) + " crossings");
    if (d.empty()) throw ValidationError("the empty diagram has no normalized bracket");
    // counts[b][loops]: states with b B-smoothings closing `loops` circles.
    std::vector<std::vector<std::int64_t>> counts(c + 1, std::vector<std::int64_t>(2 * c + 2, 0));
    std::vector<std::vector<int>> stack(c + 1);
    stack[0] = arc_partners(d);
    auto rec = [&](auto&& self, int i, int b, int loops) -> void {
        if (i == c) {
            ++counts[b][loops];
            return;
        }
        for (int t = 0; t < 2; ++t) {
            std::vector<int>& p = stack[i + 1];
            p = stack[i];
            int closed = 0;
            for (auto [s1, s2] : kPairs[t]) {
                int da = 4 * i + s1, db = 4 * i + s2;
                int a = p[da], bb = p[db];
                if (a == db) {
                    ++closed;
                } else {
                    p[a] = bb;
                    p[bb] = a;
                }
            }
            self(self, i + 1, b + t, loops + closed);
        }
    };
    rec(rec, 0, 0, 0);
    LaurentPoly total;
    LaurentPoly delta = LaurentPoly::delta();
    for (int loops = 0; loops <= 2 * c + 1; ++loops) {
        LaurentPoly inner;
        for (int b = 0; b <= c; ++b)
            if (counts[b][loops]) inner.add_scaled(LaurentPoly::monomial(c - 2 * b, BigInt(static_cast<long>(counts[b][loops]))));
        if (!inner.is_zero()) total += inner * delta.pow(loops);
    }
    return normalize(total, d.unknots());
}

std::vector<int> frontier_widths(const Diagram& d, const std::vector<int>& order) {
    int c = d.crossing_count();
    std::vector<char> done(c, 0);
    std::vector<int> widths;
    int f = 0;
    for (int x : order) {
        int glued = 0, internal = 0;
        for (int s = 0; s < 4; ++s) {
            ArcEnd o = d.across(x, s);
            if (o.crossing == x)
                ++internal;
            else if (done[o.crossing])
                ++glued;
        }
        f = f - glued + (4 - glued - internal);
        done[x] = 1;
        widths.push_back(f);
    }
    return widths;
}

CrossingOrder choose_order(const Diagram& d) {
    int c = d.crossing_count();
    CrossingOrder best;
    best.peak_width = -1;
    for (int start = 0; start < c; ++start) {
        std::vector<char> done(c, 0);
        std::vector<int> order{start};
        done[start] = 1;
        int f = frontier_widths(d, {start}).back();
        int peak = f;
        for (int step = 1; step < c; ++step) {
            int pick = -1, pick_glued = -1, pick_f = 0;
            for (int x = 0; x < c; ++x) {
                if (done[x]) continue;
                int glued = 0, internal = 0;
                for (int s = 0; s < 4; ++s) {
                    ArcEnd o = d.across(x, s);
                    if (o.crossing == x)
                        ++internal;
                    else if (done[o.crossing])
                        ++glued;
                }
                int nf = f - glued + (4 - glued - internal);
                if (glued > pick_glued || (glued == pick_glued && nf < pick_f)) {
                    pick = x;
                    pick_glued = glued;
                    pick_f = nf;
                }
            }
            order.push_back(pick);
            done[pick] = 1;
            f = pick_f;
            peak = std::max(peak, f);
            if (best.peak_width >= 0 && peak >= best.peak_width) break;
        }
        if (static_cast<int>(order.size()) == c && (best.peak_width < 0 || peak < best.peak_width)) {
            best.order = order;
            best.peak_width = peak;
        }
    }
    if (c == 0) best.peak_width = 0;
    return best;
}

LaurentPoly fast_bracket(const Diagram& d, int frontier_cap) {
    return fast_bracket(d, choose_order(d).order, frontier_cap);
}

LaurentPoly fast_bracket(const Diagram& d, const std::vector<int>& order, int frontier_cap) {
    if (d.empty()) throw ValidationError("the empty diagram has no normalized bracket");
    int c = d.crossing_count();
    if (static_cast<int>(order.size()) != c) throw ValidationError("crossing order has the wrong length");
    if (c > 0) {
        auto widths = frontier_widths(d, order);
        int peak = *std::max_element(widths.begin(), widths.end());
        if (peak > frontier_cap) throw FrontierTooWide(peak, frontier_cap);
    }
    std::vector<int> across = arc_partners(d);
    std::vector<int> pos(4 * c, -1);  // frontier index of each open dart
    std::vector<int> frontier;
    std::unordered_map<std::string, LaurentPoly> states{{std::string(), LaurentPoly(1)}};

    for (int x : order) {
        int F = static_cast<int>(frontier.size());
        std::array<int, 4> glue{-1, -1, -1, -1}, internal{-1, -1, -1, -1};
        for (int s = 0; s < 4; ++s) {
            int o = across[4 * x + s];
            if (o / 4 == x)
                internal[s] = o % 4;
            else if (pos[o] >= 0)
                glue[s] = pos[o];
        }
        std::vector<int> new_index(F + 4, -1);
        std::vector<int> next_frontier;
        std::vector<char> glued_old(F, 0);
        for (int s = 0; s < 4; ++s)
            if (glue[s] >= 0) glued_old[glue[s]] = 1;
        for (int i = 0; i < F; ++i)
            if (!glued_old[i]) {
                new_index[i] = static_cast<int>(next_frontier.size());
                next_frontier.push_back(frontier[i]);
            }
        for (int s = 0; s < 4; ++s)
            if (glue[s] < 0 && internal[s] < 0) {
                new_index[F + s] = static_cast<int>(next_frontier.size());
                next_frontier.push_back(4 * x + s);
            }
        int NF = static_cast<int>(next_frontier.size());

        std::unordered_map<std::string, LaurentPoly> next;
        next.reserve(states.size() * 2);
        // Local graph: nodes 0..F-1 (old endpoints) and F..F+3 (slots of x).
        int N = F + 4;
        std::vector<std::array<int, 2>> adj(N);
        std::vector<int> deg(N);
        std::vector<std::array<int, 2>> edge_nodes;
        std::vector<char> edge_seen;
        for (auto& [key, poly] : states) {
            for (int t = 0; t < 2; ++t) {
                std::fill(deg.begin(), deg.end(), 0);
                edge_nodes.clear();
                auto add = [&](int u, int v) {
                    int id = static_cast<int>(edge_nodes.size());
                    edge_nodes.push_back({u, v});
                    adj[u][deg[u]++] = id;
                    adj[v][deg[v]++] = id;
                };
                for (int i = 0; i < F; ++i)
                    if (key[i] > i) add(i, key[i]);
                for (int s = 0; s < 4; ++s) {
                    if (glue[s] >= 0) add(glue[s], F + s);
                    if (internal[s] > s) add(F + s, F + internal[s]);
                }
                for (auto [s1, s2] : kPairs[t]) add(F + s1, F + s2);
                edge_seen.assign(edge_nodes.size(), 0);
                std::string nkey(NF, 0);
                for (int u = 0; u < N; ++u) {
                    if (deg[u] != 1 || edge_seen[adj[u][0]]) continue;
                    int cur = u, e = adj[u][0];
                    while (true) {
                        edge_seen[e] = 1;
                        int nxt = edge_nodes[e][0] == cur ? edge_nodes[e][1] : edge_nodes[e][0];
                        cur = nxt;
                        if (deg[cur] == 1) break;
                        e = adj[cur][0] == e ? adj[cur][1] : adj[cur][0];
                    }
                    nkey[new_index[u]] = static_cast<char>(new_index[cur]);
                    nkey[new_index[cur]] = static_cast<char>(new_index[u]);
                }
                int loops = 0;
                for (std::size_t e0 = 0; e0 < edge_nodes.size(); ++e0) {
                    if (edge_seen[e0]) continue;
                    ++loops;
                    int cur = edge_nodes[e0][0], e = static_cast<int>(e0);
                    while (!edge_seen[e]) {
                        edge_seen[e] = 1;
                        cur = edge_nodes[e][0] == cur ? edge_nodes[e][1] : edge_nodes[e][0];
                        e = adj[cur][0] == e ? adj[cur][1] : adj[cur][0];
                    }
                }
                auto& slot = next[nkey];
                int shift = t == 0 ? 1 : -1;
                if (loops == 0) {
                    slot.add_scaled(poly, shift);
                } else {
                    LaurentPoly tmp = poly;
                    for (int l = 0; l < loops; ++l) tmp.mul_delta();
                    slot.add_scaled(tmp, shift);
                }
            }
        }
        states = std::move(next);
        for (int dart : frontier) pos[dart] = -1;
        frontier = std::move(next_frontier);
        for (int i = 0; i < NF; ++i) pos[frontier[i]] = i;
    }
    LaurentPoly total = states.count(std::string()) ? states[std::string()] : LaurentPoly();
    return normalize(total, d.unknots());
}

LaurentPoly bracket(const Diagram& d, const EngineOptions& opt) {
    switch (opt.engine) {
        case Engine::Skein: return skein_bracket(d, opt.naive_limit);
        case Engine::Subgraph: return subgraph_bracket(d, opt.naive_limit, opt.threads);
        case Engine::Fast: break;
    }
    return fast_bracket(d, opt.frontier_cap);
}

}  // namespace joneslab
