#pragma once

#include <gmpxx.h>
#include <map>
#include <random>
#include <vector>
#include <string>

#include "joneslab/ingest.hpp"
#include "joneslab/poly.hpp"
#include "joneslab/ribbon.hpp"
#include "joneslab/states.hpp"

namespace testing {

inline const std::vector<joneslab::TableEntry>& fixtures() {
    static const auto t = joneslab::load_table(std::string(JONESLAB_DATA_DIR) + "/fixtures.csv");
    return t.entries;
}

inline const joneslab::Diagram& fixture(const std::string& name) {
    return joneslab::find_entry(fixtures(), name).pd;
}

// Plain exponent -> coefficient map, used as an arithmetic oracle.
using Terms = std::map<int, mpz_class>;

inline void clean(Terms& t) {
    for (auto it = t.begin(); it != t.end();) it = it->second == 0 ? t.erase(it) : std::next(it);
}

inline Terms mul(const Terms& a, const Terms& b) {
    Terms r;
    for (auto& [i, x] : a)
        for (auto& [j, y] : b) r[i + j] += x * y;
    clean(r);
    return r;
}

inline Terms add(Terms a, const Terms& b, int sign = 1) {
    for (auto& [j, y] : b) a[j] += sign * y;
    clean(a);
    return a;
}

// Circles of a state by depth-first search over crossing slots: each arc joins
// its two slots, and each smoothing joins two slots of its crossing.
inline int traced_circles(const joneslab::Diagram& d, const std::vector<bool>& b) {
    int c = d.crossing_count();
    std::vector<std::vector<int>> adj(4 * c);
    std::map<int, std::vector<int>> by_arc;
    for (int x = 0; x < c; ++x)
        for (int s = 0; s < 4; ++s) by_arc[d.crossing(x).arcs[s]].push_back(4 * x + s);
    for (auto& [arc, ends] : by_arc) {
        adj[ends[0]].push_back(ends[1]);
        adj[ends[1]].push_back(ends[0]);
    }
    for (int x = 0; x < c; ++x) {
        int first = b[x] ? 1 : 0;
        for (int corner : {first, first + 2}) {
            int p = 4 * x + corner, q = 4 * x + (corner + 1) % 4;
            adj[p].push_back(q);
            adj[q].push_back(p);
        }
    }
    std::vector<bool> seen(4 * c);
    int count = 0;
    for (int v = 0; v < 4 * c; ++v) {
        if (seen[v]) continue;
        ++count;
        std::vector<int> stack{v};
        seen[v] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : adj[u]) {
                if (seen[w]) continue;
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    return count + d.unknots();
}

// Boundary components of the ribbon subgraph, walked along the state circles
// of the all-A state: at an included band the walk crosses to the band's other
// end and keeps its sense when the band sits on the same side of both circles.
inline int traced_faces(const joneslab::StateGraph& g, const joneslab::SpanningSubgraph& h) {
    std::vector<int> base(g.circle_count() + 1, 0);
    for (int c = 0; c < g.circle_count(); ++c) base[c + 1] = base[c] + static_cast<int>(g.circles[c].size());
    auto state = [&](int c, int pos, int dir) { return 2 * (base[c] + pos) + (dir > 0 ? 0 : 1); };
    std::vector<bool> seen(2 * base.back());
    int faces = 0, orbits = 0;
    for (int c = 0; c < g.circle_count(); ++c) {
        bool any = false;
        for (auto& a : g.circles[c]) any = any || h.has(a.crossing);
        if (!any) ++faces;
    }
    for (int c0 = 0; c0 < g.circle_count(); ++c0) {
        int len0 = static_cast<int>(g.circles[c0].size());
        for (int p0 = 0; p0 < len0; ++p0) {
            if (!h.has(g.circles[c0][p0].crossing)) continue;
            for (int d0 : {1, -1}) {
                if (seen[state(c0, p0, d0)]) continue;
                ++orbits;
                int c = c0, p = p0, d = d0;
                while (!seen[state(c, p, d)]) {
                    seen[state(c, p, d)] = true;
                    int len = static_cast<int>(g.circles[c].size());
                    int q = p;
                    do q = ((q + d) % len + len) % len;
                    while (!h.has(g.circles[c][q].crossing));
                    const joneslab::Attachment& a = g.circles[c][q];
                    const auto& ends = g.edges[a.crossing];
                    int other = ends[0].circle == c && ends[0].position == q ? 1 : 0;
                    int c2 = ends[other].circle, p2 = ends[other].position;
                    d = g.circles[c2][p2].left == a.left ? d : -d;
                    c = c2;
                    p = p2;
                }
            }
        }
    }
    return faces + orbits / 2;
}

inline Terms delta_terms() { return {{-2, -1}, {2, -1}}; }

inline Terms power(const Terms& a, int k) {
    Terms r{{0, 1}};
    for (int i = 0; i < k; ++i) r = mul(r, a);
    return r;
}

// <D> as the plain state sum of A^{#A - #B} delta^{circles - 1}.
inline Terms state_sum(const joneslab::Diagram& d) {
    int c = d.crossing_count();
    Terms total;
    for (std::uint64_t m = 0; m < (1ull << c); ++m) {
        std::vector<bool> b(c);
        int nb = 0;
        for (int i = 0; i < c; ++i) nb += b[i] = (m >> i) & 1;
        Terms term = mul({{c - 2 * nb, 1}}, power(delta_terms(), traced_circles(d, b) - 1));
        total = add(total, term);
    }
    return total;
}

inline joneslab::LaurentPoly to_poly(const Terms& t) {
    std::map<int, joneslab::BigInt> m(t.begin(), t.end());
    return joneslab::LaurentPoly::from_map(m);
}

inline Terms random_terms(std::mt19937_64& rng, int lo, int hi, int count) {
    std::uniform_int_distribution<int> e(lo, hi), c(-9, 9);
    Terms t;
    for (int i = 0; i < count; ++i) t[e(rng)] += c(rng);
    clean(t);
    return t;
}

}  // namespace testing
