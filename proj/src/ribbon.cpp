#include "joneslab/ribbon.hpp"

#include <bit>

#include "joneslab/errors.hpp"
#include "joneslab/parallel.hpp"
#include "union_find.hpp"

namespace joneslab {

SpanningSubgraph SpanningSubgraph::from_mask(int edges, std::uint64_t mask) {
    SpanningSubgraph h(edges);
    for (int i = 0; i < edges; ++i) h.in_[i] = (mask >> i) & 1;
    return h;
}

SpanningSubgraph SpanningSubgraph::from_edges(int edges, const std::vector<int>& list) {
    SpanningSubgraph h(edges);
    for (int i : list) h.in_[i] = true;
    return h;
}

int SpanningSubgraph::size() const { return static_cast<int>(std::count(in_.begin(), in_.end(), true)); }

std::vector<int> SpanningSubgraph::edges() const {
    std::vector<int> out;
    for (int i = 0; i < edge_total(); ++i)
        if (in_[i]) out.push_back(i);
    return out;
}

RibbonGraph::RibbonGraph(const Diagram& d)
    : d_(d), graph_(resolve(d, KauffmanState::all_A(d.crossing_count()))), counter_(d) {
    v_ = graph_.circle_count();
    for (auto& e : graph_.edges) ends_.emplace_back(e[0].circle, e[1].circle);
}

int RibbonGraph::components(const SpanningSubgraph& h) const {
    UnionFind uf(v_);
    for (int i = 0; i < edge_count(); ++i)
        if (h.has(i)) uf.unite(ends_[i].first, ends_[i].second);
    return uf.count();
}

int RibbonGraph::faces(const SpanningSubgraph& h) const { return counter_.count(h.bits()); }

SubgraphStats RibbonGraph::stats(const SpanningSubgraph& h) const {
    SubgraphStats s;
    s.v = v_;
    s.e = h.size();
    s.k = components(h);
    s.f = faces(h);
    int twice = 2 * s.k - s.v + s.e - s.f;
    if (twice < 0 || twice % 2 != 0) throw ValidationError("non-integral ribbon genus");
    s.g = twice / 2;
    return s;
}

namespace {

LaurentPoly delta_power(int k) { return LaurentPoly::delta().pow(k); }

}  // namespace

LaurentPoly RibbonGraph::contribution(const SubgraphStats& s) const {
    return delta_power(s.f - 1).shifted(edge_count() - 2 * s.e);
}

LaurentPoly RibbonGraph::contribution(const SpanningSubgraph& h) const { return contribution(stats(h)); }

SubgraphStats stats(const Diagram& d, const SpanningSubgraph& h) { return RibbonGraph(d).stats(h); }

LaurentPoly contribution(const Diagram& d, const SpanningSubgraph& h) { return RibbonGraph(d).contribution(h); }

LaurentPoly subgraph_bracket(const Diagram& d, int naive_limit, int threads) {
    int c = d.crossing_count();
    if (c > naive_limit || c > 40) throw TooLarge("subgraph expansion limited to " + std::to_string(naive_limit) + " crossings");
    if (d.empty()) throw ValidationError("the empty diagram has no normalized bracket");
    RibbonGraph g(d);
    int max_f = c + 2 + d.unknots() + g.vertex_count();
    std::int64_t total = std::int64_t{1} << c;
    std::int64_t chunk = std::max<std::int64_t>(1, total / 64);
    std::int64_t chunks = (total + chunk - 1) / chunk;
    // counts[e * (max_f + 1) + f]
    std::vector<std::vector<std::int64_t>> partial(chunks, std::vector<std::int64_t>((c + 1) * (max_f + 1), 0));
    parallel_for(threads, chunks, [&](std::int64_t ch) {
        auto& cnt = partial[ch];
        std::int64_t hi = std::min(total, (ch + 1) * chunk);
        for (std::int64_t m = ch * chunk; m < hi; ++m) {
            int e = std::popcount(static_cast<std::uint64_t>(m));
            int f = g.counter().count(static_cast<std::uint64_t>(m));
            ++cnt[e * (max_f + 1) + f];
        }
    });
    std::vector<std::int64_t> counts((c + 1) * (max_f + 1), 0);
    for (auto& p : partial)
        for (std::size_t i = 0; i < p.size(); ++i) counts[i] += p[i];
    LaurentPoly result;
    for (int f = 1; f <= max_f; ++f) {
        LaurentPoly inner;
        for (int e = 0; e <= c; ++e) {
            std::int64_t n = counts[e * (max_f + 1) + f];
            if (n) inner.add_scaled(LaurentPoly::monomial(c - 2 * e, BigInt(static_cast<long>(n))));
        }
        if (!inner.is_zero()) result += inner * delta_power(f - 1);
    }
    return result;
}

void for_each_low_rank(const RibbonGraph& g, int r, const std::function<void(const SpanningSubgraph&)>& fn) {
    int e = g.edge_count();
    SpanningSubgraph h(e);
    std::vector<int> parent(g.vertex_count());
    for (int i = 0; i < g.vertex_count(); ++i) parent[i] = i;
    auto find = [](std::vector<int>& p, int x) {
        while (p[x] != x) x = p[x];
        return x;
    };
    std::function<void(int, int)> rec = [&](int i, int rank) {
        if (i == e) {
            fn(h);
            return;
        }
        rec(i + 1, rank);
        auto [u, w] = g.ends(i);
        int ru = find(parent, u), rw = find(parent, w);
        h.set(i, true);
        if (ru == rw) {
            rec(i + 1, rank);
        } else if (rank < r) {
            parent[ru] = rw;
            rec(i + 1, rank + 1);
            parent[ru] = ru;
        }
        h.set(i, false);
    };
    rec(0, 0);
}

std::vector<SpanningSubgraph> enumerate_low_rank(const Diagram& d, int r) {
    std::vector<SpanningSubgraph> out;
    RibbonGraph g(d);
    for_each_low_rank(g, r, [&](const SpanningSubgraph& h) { out.push_back(h); });
    return out;
}

}  // namespace joneslab
