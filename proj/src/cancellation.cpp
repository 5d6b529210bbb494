#include "joneslab/cancellation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "joneslab/bracket.hpp"
#include "joneslab/errors.hpp"
#include "union_find.hpp"

namespace joneslab {

LaurentPoly binomial_cancellation(int c, int d, int k) {
    if (d < 0 || k < 0) throw InvalidN("binomial sum needs d >= 0 and k >= 0");
    // 1 + A^-2 delta = -A^-4, so the sum collapses to A^c delta^d (-A^-4)^k.
    LaurentPoly p = LaurentPoly::delta().pow(d).shifted(c - 4 * k);
    return k % 2 ? -p : p;
}

std::string label_name(const EdgeLabel& l) {
    std::string s = std::to_string(l.number);
    if (l.side == Side::R) return "R" + s;
    if (l.side == Side::L) return "L" + s;
    return s;
}

namespace {

int side_index(Side s) { return s == Side::L ? 1 : 0; }

// Circles at the two ends of crossing x's edge in the state given by bits,
// read from the union-find labels of arcs.
std::pair<int, int> end_circles(const CircleCounter& cc, const std::vector<bool>& bits, const std::vector<int>& root,
                                int x) {
    const auto& s = cc.slots(x);
    int first = bits[x] ? 1 : 0;
    return {root[s[first]], root[s[first + 2]]};
}

}  // namespace

int choose_violating_crossing(const Diagram& d) {
    Adequacy ad = is_A_adequate(d);
    if (ad.adequate) throw NotApplicable("diagram is A-adequate");
    StateGraph g = resolve(d, KauffmanState::all_A(d.crossing_count()));
    std::vector<char> is_loop(d.crossing_count(), 0);
    for (int x : ad.loops) is_loop[x] = 1;
    for (int x : ad.loops) {
        int c = g.edges[x][0].circle;
        const auto& circ = g.circles[c];
        int sz = static_cast<int>(circ.size());
        int p = g.edges[x][0].position, q = g.edges[x][1].position;
        bool left = circ[p].left;
        for (auto [from, to] : {std::pair{p, q}, std::pair{q, p}}) {
            bool clear = true;
            for (int i = (from + 1) % sz; i != to; i = (i + 1) % sz) {
                const auto& at = circ[i];
                if (at.crossing != x && is_loop[at.crossing] && at.left == left) {
                    clear = false;
                    break;
                }
            }
            if (clear) return x;
        }
    }
    return *ad.witness;
}

const std::vector<int>& CableLabeling::edges(int region, Side side) const {
    return by_region_[region][region == 0 ? 0 : side_index(side)];
}

std::optional<int> CableLabeling::edge(int region, Side side, int number) const {
    if (region < 0 || region >= n_) return std::nullopt;
    for (int x : edges(region, side))
        if (labels_[x]->number == number) return x;
    return std::nullopt;
}

std::string CableLabeling::name(int x) const {
    if (!labels_[x]) return "x" + std::to_string(x);
    return label_name(*labels_[x]);
}

nlohmann::json CableLabeling::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    j["violating_crossing"] = e_;
    j["circles"] = S_;
    j["edges"] = nlohmann::json::array();
    for (int x = 0; x < static_cast<int>(labels_.size()); ++x) {
        if (!labels_[x]) continue;
        const auto& cell = cable_.cells[x];
        j["edges"].push_back({{"crossing", x},
                              {"cell", {cell.x, cell.y}},
                              {"region", labels_[x]->region},
                              {"label", name(x)}});
    }
    return j;
}

CableLabeling label_cable(const Diagram& d, int n) {
    if (n < 2) throw NotApplicable("labeling needs n >= 2");
    CableLabeling L;
    L.e_ = choose_violating_crossing(d);
    L.base_ = d;
    L.n_ = n;
    L.cable_ = cable(d, n);
    L.ribbon_ = std::make_shared<RibbonGraph>(L.cable_.diagram);
    const StateGraph& g = L.ribbon_->all_A();
    int c = L.cable_.diagram.crossing_count();
    L.labels_.assign(c, std::nullopt);
    L.region_.assign(c, -1);
    L.by_region_.assign(n, {});

    auto cell = [&](int x, int y) { return L.cable_.index_of(L.e_, x, y); };
    auto fail = [](const std::string& what) { throw LabelingInconsistent(what); };

    int s0 = g.edges[cell(1, 1)][0].circle;
    for (int x = 1; x <= n; ++x) {
        int i = cell(x, x);
        if (g.edges[i][0].circle != s0 || g.edges[i][1].circle != s0) fail("cabled loops do not share a circle");
    }
    L.S_.push_back(s0);
    for (int r = 1; r < n; ++r) {
        int next = -1;
        for (int x = 1; x <= n; ++x)
            for (int y = 1; y <= n; ++y) {
                if (std::abs(x - y) != r) continue;
                int i = cell(x, y);
                int a = g.edges[i][0].circle, b = g.edges[i][1].circle;
                if (a != L.S_[r - 1]) std::swap(a, b);
                if (a != L.S_[r - 1]) fail("cable edge misses the previous circle");
                if (next < 0) next = b;
                if (b != next) fail("cable edges of one region reach different circles");
            }
        if (std::find(L.S_.begin(), L.S_.end(), next) != L.S_.end()) fail("cable circles repeat");
        L.S_.push_back(next);
    }

    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y) {
            int r = std::abs(x - y);
            Side side = r == 0 ? Side::Center : (x > y ? Side::R : Side::L);
            L.labels_[cell(x, y)] = EdgeLabel{r, side, x + y - 1};
            L.by_region_[r][side_index(side)].push_back(cell(x, y));
        }
    for (auto& pr : L.by_region_)
        for (auto& v : pr)
            std::sort(v.begin(), v.end(), [&](int a, int b) { return L.labels_[a]->number < L.labels_[b]->number; });

    auto flag = [&](int x, int k) { return g.circles[g.edges[x][k].circle][g.edges[x][k].position].left; };
    auto end_on = [&](int x, int circle) {
        for (int k = 0; k < 2; ++k)
            if (g.edges[x][k].circle == circle) return k;
        return -1;
    };
    // inward[j]: side of S_j facing Omega_j; the other side faces Omega_{j+1}.
    std::vector<int> inward(n);
    inward[0] = flag(cell(1, 1), 0);
    for (int r = 1; r < n; ++r) {
        int i = cell(r + 1, 1);
        inward[r] = flag(i, end_on(i, L.S_[r]));
    }
    for (int x = 0; x < c; ++x) {
        if (!L.labels_[x]) continue;
        int r = L.labels_[x]->region;
        for (int k = 0; k < 2; ++k) {
            int circle = g.edges[x][k].circle;
            int j = static_cast<int>(std::find(L.S_.begin(), L.S_.end(), circle) - L.S_.begin());
            bool want = r == 0 || j == r ? inward[j] : !inward[j];
            if (flag(x, k) != want) fail("cable edge attaches on the wrong side of its circle");
        }
    }

    // Circle sides joined by edges; each annulus between S_{r-1} and S_r must
    // touch no other circle.
    UnionFind sides(2 * g.circle_count());
    for (int x = 0; x < c; ++x)
        sides.unite(2 * g.edges[x][0].circle + flag(x, 0), 2 * g.edges[x][1].circle + flag(x, 1));
    for (int r = 1; r < n; ++r) {
        int outer = 2 * L.S_[r - 1] + !inward[r - 1], inner = 2 * L.S_[r] + inward[r];
        if (sides.find(outer) != sides.find(inner)) fail("annulus sides are not joined");
        for (int node = 0; node < 2 * g.circle_count(); ++node)
            if (node != outer && node != inner && sides.find(node) == sides.find(outer))
                fail("annulus touches a circle outside the cable");
    }

    for (int x = 0; x < c; ++x) {
        int ends[2];
        for (int k = 0; k < 2; ++k) ends[k] = 2 * g.edges[x][k].circle + flag(x, k);
        if (ends[0] == 2 * s0 + inward[0] || ends[1] == 2 * s0 + inward[0]) {
            L.region_[x] = 0;
            continue;
        }
        for (int r = 1; r < n; ++r) {
            int outer = 2 * L.S_[r - 1] + !inward[r - 1], inner = 2 * L.S_[r] + inward[r];
            if ((ends[0] == outer || ends[0] == inner) && (ends[1] == outer || ends[1] == inner)) L.region_[x] = r;
        }
    }

    // Numbering rule: an edge of Omega_r numbered m sits on S_{r-1} between
    // the ends of the Omega_{r-1} edges numbered m - 1 and m + 1, and all
    // edges of one side see them in the same cyclic order.
    for (int r = 1; r < n; ++r) {
        int circle = L.S_[r - 1];
        const auto& circ = g.circles[circle];
        int sz = static_cast<int>(circ.size());
        std::array<int, 2> orient{0, 0};
        for (int side = 0; side < 2; ++side)
            for (int x : L.by_region_[r][side]) {
                int m = L.labels_[x]->number;
                int p = g.edges[x][end_on(x, circle)].position;
                auto neighbor = [&](int step) {
                    for (int i = (p + step + sz) % sz; i != p; i = (i + step + sz) % sz) {
                        int y = circ[i].crossing;
                        if (L.labels_[y] && L.labels_[y]->region == r - 1) return L.labels_[y]->number;
                    }
                    return -1;
                };
                int prev = neighbor(-1), next = neighbor(1);
                int o = prev == m - 1 && next == m + 1 ? 1 : (prev == m + 1 && next == m - 1 ? -1 : 0);
                if (o == 0 || (orient[side] != 0 && orient[side] != o))
                    fail("edge " + L.name(x) + " breaks the numbering rule");
                orient[side] = o;
            }
        if (orient[0] == orient[1]) fail("both sides of region " + std::to_string(r) + " share an orientation");
    }
    return L;
}

std::vector<int> a_of(const CableLabeling& L, const SpanningSubgraph& h) {
    int c = h.edge_total();
    std::vector<bool> bits(c, false);
    for (int x = 0; x < c; ++x) bits[x] = h.has(x) && L.region(x) == 1;
    std::vector<int> root;
    const CircleCounter& cc = L.ribbon().counter();
    cc.label(bits, root);
    const auto& loops = L.loops();
    int lo = -1, hi = -1;
    for (int i = 0; i < static_cast<int>(loops.size()); ++i) {
        auto [u, v] = end_circles(cc, bits, root, loops[i]);
        if (u != v) {
            if (lo < 0) lo = i;
            hi = i;
        }
    }
    if (lo < 0) return {};
    return std::vector<int>(loops.begin() + lo, loops.begin() + hi + 1);
}

namespace {

struct SaChoice {
    int edge;
    int k;
    Side side;
    bool free;
};

std::vector<int> scan_order(int n) {
    std::vector<int> ks;
    for (int k = 1; k <= n - 2; ++k) ks.push_back(k);
    ks.push_back(0);
    return ks;
}

std::optional<SaChoice> choose_s_a(const CableLabeling& L, const SpanningSubgraph& h, const std::vector<int>& a) {
    if (a.empty()) return std::nullopt;
    int m = L.number(a.front());
    int n = L.n();
    if (m == 1) {
        int c = h.edge_total();
        std::vector<bool> bits(c, false);
        for (int x = 0; x < c; ++x) bits[x] = h.has(x) && !L.label(x) && L.region(x) != n - 1;
        std::vector<int> root;
        const CircleCounter& cc = L.ribbon().counter();
        cc.label(bits, root);
        // Region 0 is tried last: its loop can sit on one circle of H^e while
        // included region-1 edges of e^n still split it in H.
        for (int k : scan_order(n)) {
            int x = *L.edge(k, Side::R, k + 1);
            auto [u, v] = end_circles(cc, bits, root, x);
            if (u != v) continue;
            if (k > 0) {
                int prev = *L.edge(k - 1, Side::R, k);
                if (h.has(prev)) return SaChoice{prev, k - 1, Side::R, false};
            }
            return SaChoice{x, k, Side::R, true};
        }
        throw WitnessMissing("no region has its smallest right edge on a single circle");
    }
    auto r = L.edge(1, Side::R, m - 1), l = L.edge(1, Side::L, m - 1);
    if (!h.has(*r) && !h.has(*l))
        throw WitnessMissing("neither edge numbered " + std::to_string(m - 1) + " in region 1 is included");
    if (h.has(*r)) return SaChoice{*r, 1, Side::R, false};
    return SaChoice{*l, 1, Side::L, false};
}

}  // namespace

std::optional<int> s_a_of(const CableLabeling& L, const SpanningSubgraph& h) {
    auto ch = choose_s_a(L, h, a_of(L, h));
    if (!ch) return std::nullopt;
    return ch->edge;
}

namespace {

class Analyzer {
public:
    Analyzer(const CableLabeling& L, const SpanningSubgraph& h) : L_(L), h_(h), n_(L.n()) {}

    SubgraphAnalysis run() {
        SubgraphAnalysis r;
        r.a = a_of(L_, h_);
        r.seq[0].assign(n_, {});
        r.seq[1].assign(n_, {});
        if (r.a.empty()) return r;
        r.m = L_.number(r.a.front());
        M_ = r.M = L_.number(r.a.back());
        auto ch = choose_s_a(L_, h_, r.a);
        r.s_a = ch->edge;
        r.k = ch->k;
        r.side = ch->side;
        r.s_a_free = ch->free;
        // Terms are bounded by M; a starting edge beyond M leaves every
        // sequence empty.
        if (L_.number(ch->edge) > M_) return r;
        build_sequences(r);
        build_G(r);
        r.g_a = genus_count(r);
        return r;
    }

private:
    int num(int x) const { return L_.number(x); }

    std::optional<int> next_included(int region, int side, int above) const {
        if (region < 0 || region >= n_) return std::nullopt;
        for (int x : L_.edges(region, side ? Side::L : Side::R)) {
            int v = num(x);
            if (v > above && v <= M_ && h_.has(x)) return x;
        }
        return std::nullopt;
    }

    std::vector<int> run_sequence(int start, int region, int side, int dir) const {
        std::vector<int> s{start};
        for (int j = 1;; ++j) {
            int reg = region + dir * (j % 2);
            auto x = next_included(reg, side, num(s.back()));
            if (!x) break;
            s.push_back(*x);
        }
        return s;
    }

    void build_sequences(SubgraphAnalysis& r) {
        int P = side_index(r.side), Q = 1 - P;
        std::array<std::vector<std::optional<int>>, 2> first;
        first[0].assign(n_, std::nullopt);
        first[1].assign(n_, std::nullopt);
        first[P][r.k] = *r.s_a;
        for (int i = r.k + 1; i < n_; ++i)
            if (first[P][i - 1]) first[P][i] = next_included(i, P, num(*first[P][i - 1]));
        for (int i = r.k - 1; i >= 0; --i)
            if (first[P][i + 1]) first[P][i] = next_included(i, P, num(*first[P][i + 1]));
        first[Q][0] = first[P][0];
        for (int i = 1; i < n_; ++i)
            if (first[Q][i - 1]) first[Q][i] = next_included(i, Q, num(*first[Q][i - 1]));
        for (int side = 0; side < 2; ++side)
            for (int i = 0; i < n_; ++i) {
                if (!first[side][i]) continue;
                r.seq[side][i].t = run_sequence(*first[side][i], i, side, 1);
                if (i > 0) r.seq[side][i].b = run_sequence(*first[side][i], i, side, -1);
            }
        r.seq[0][0].b = r.seq[1][0].t;
        r.seq[1][0].b = r.seq[0][0].t;
    }

    // Edges of the region strictly between consecutive even and odd terms.
    std::set<int> between(const std::vector<int>& s, int region, int side) const {
        std::set<int> out;
        for (std::size_t j = 0; j < s.size(); j += 2) {
            int lo = num(s[j]);
            int hi = j + 1 < s.size() ? num(s[j + 1]) : M_ + 1;
            for (int x : L_.edges(region, side ? Side::L : Side::R))
                if (num(x) > lo && num(x) < hi) out.insert(x);
        }
        return out;
    }

    void build_G(SubgraphAnalysis& r) {
        std::set<int> G;
        for (int side = 0; side < 2; ++side)
            for (int i = 0; i + 1 < n_; ++i) {
                const auto& rs = r.seq[side][i];
                if (rs.t.empty() || rs.b.empty()) continue;
                auto t = between(rs.t, i, side), b = between(rs.b, i, side);
                for (int x : t)
                    if (b.count(x)) G.insert(x);
            }
        if (r.m == 1 && r.s_a_free) G.insert(*r.s_a);
        r.G.assign(G.begin(), G.end());
    }

    int interleaved(const std::vector<int>& inner, const std::vector<int>& outer) const {
        int count = 0;
        for (std::size_t l = 0; l < inner.size(); l += 2)
            for (std::size_t j = 0; j + 1 < outer.size(); j += 2) {
                int lo = std::min(num(outer[j]), num(outer[j + 1])), hi = std::max(num(outer[j]), num(outer[j + 1]));
                if (num(inner[l]) > lo && num(inner[l]) < hi) {
                    ++count;
                    break;
                }
            }
        return count;
    }

    int genus_count(const SubgraphAnalysis& r) const {
        int P = side_index(r.side), Q = 1 - P;
        auto tg = [&](int side, int i) { return interleaved(r.seq[side][i].t, r.seq[side][i].b); };
        auto bg = [&](int side, int i) {
            if (i == r.k) return static_cast<int>(r.seq[side][i].b.size()) / 2;
            return interleaved(r.seq[side][i].b, r.seq[side][i].t);
        };
        int total = 0;
        for (int i = 0; i <= r.k && i <= n_ - 2; ++i) total += bg(P, i);
        for (int i = r.k; i <= n_ - 2; ++i) total += tg(P, i);
        for (int i = 1; i <= n_ - 2; ++i) total += tg(Q, i);
        return total;
    }

    const CableLabeling& L_;
    const SpanningSubgraph& h_;
    int n_;
    int M_ = 0;
};

}  // namespace

SubgraphAnalysis analyze(const CableLabeling& L, const SpanningSubgraph& h) {
    SubgraphAnalysis r = Analyzer(L, h).run();
    return r;
}

std::vector<int> G_of(const CableLabeling& L, const SpanningSubgraph& h) { return analyze(L, h).G; }

int g_a_of(const CableLabeling& L, const SpanningSubgraph& h) { return analyze(L, h).g_a; }

namespace {

std::vector<int> free_edges(const CableLabeling& L, const SubgraphAnalysis& r) {
    std::set<int> f(r.G.begin(), r.G.end());
    for (int x : L.loops())
        if (std::find(r.a.begin(), r.a.end(), x) == r.a.end()) f.insert(x);
    return {f.begin(), f.end()};
}

std::string describe(const CableLabeling& L, const std::vector<int>& xs) {
    std::string s = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + L.name(xs[i]);
    return s + "}";
}

}  // namespace

std::vector<ClassDescriptor> partition_classes(const CableLabeling& L) {
    const RibbonGraph& g = L.ribbon();
    using Key = std::tuple<std::vector<int>, std::vector<int>, std::vector<bool>>;
    std::map<Key, ClassDescriptor> classes;
    for_each_low_rank(g, L.n() - 2, [&](const SpanningSubgraph& h) {
        SubgraphAnalysis r = analyze(L, h);
        auto fr = free_edges(L, r);
        SpanningSubgraph base = h;
        for (int x : fr) base.set(x, false);
        Key key{r.a, r.G, base.bits()};
        auto [it, fresh] = classes.try_emplace(key);
        ClassDescriptor& cd = it->second;
        if (fresh) {
            cd.a = r.a;
            cd.G = r.G;
            cd.free_set = fr;
            cd.base = base;
        }
        cd.members.push_back(h);
    });
    std::vector<ClassDescriptor> out;
    for (auto& [key, cd] : classes) {
        std::size_t want = std::size_t{1} << cd.free_set.size();
        if (cd.members.size() != want)
            throw PartitionError("class a=" + describe(L, cd.a) + " G=" + describe(L, cd.G) + " has " +
                                 std::to_string(cd.members.size()) + " members, expected " + std::to_string(want));
        cd.analysis = analyze(L, cd.base);
        if (cd.analysis.a != cd.a || cd.analysis.G != cd.G)
            throw PartitionError("base of class a=" + describe(L, cd.a) + " reads a different a or G");
        cd.base_stats = g.stats(cd.base);
        out.push_back(std::move(cd));
    }
    return out;
}

std::vector<ClassDescriptor> partition_classes(const Diagram& d, int n) { return partition_classes(label_cable(d, n)); }

bool DegreeDropReport::passed() const {
    if (bracket_degree && *bracket_degree > bound) return false;
    for (auto& c : classes)
        if (!c.degree_ok) return false;
    return face_failures == 0 && rank_genus_failures == 0 && lemma_failures == 0;
}

nlohmann::json DegreeDropReport::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["cable_crossings"] = c;
    j["M"] = M;
    j["bound"] = bound;
    j["bracket_degree"] = bracket_degree ? nlohmann::json(*bracket_degree) : nlohmann::json(nullptr);
    j["gap"] = bracket_degree ? nlohmann::json(M - *bracket_degree) : nlohmann::json(nullptr);
    j["subgraphs"] = subgraphs;
    j["classes"] = classes.size();
    std::optional<int> worst;
    for (auto& c : classes)
        if (c.degree && (!worst || *c.degree > *worst)) worst = c.degree;
    j["max_class_degree"] = worst ? nlohmann::json(*worst) : nlohmann::json(nullptr);
    j["face_failures"] = face_failures;
    j["rank_genus_failures"] = rank_genus_failures;
    j["lemma_checked"] = lemma_checked;
    j["lemma_failures"] = lemma_failures;
    j["passed"] = passed();
    return j;
}

DegreeDropReport verify_degree_drop(const Diagram& d, int n, int frontier_cap) {
    CableLabeling L = label_cable(d, n);
    const RibbonGraph& g = L.ribbon();
    DegreeDropReport rep;
    rep.n = n;
    rep.c = g.edge_count();
    rep.M = rep.c + 2 * g.vertex_count() - 2;
    rep.bound = rep.M - 4 * (n - 1);
    auto classes = partition_classes(L);
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const auto& cd = classes[i];
        ClassCheck ck;
        ck.index = static_cast<int>(i);
        const SubgraphStats& s0 = cd.base_stats;
        int rg0 = s0.rank() + s0.g;
        LaurentPoly X;
        for (const auto& h : cd.members) {
            rep.subgraphs++;
            SubgraphStats s = g.stats(h);
            X += g.contribution(s);
            int added = 0;
            for (int x : cd.free_set) added += h.has(x);
            if (s.f != s0.f + added) ck.faces_ok = false;
            if (s.rank() + s.g != rg0) ck.rank_genus_ok = false;
        }
        ck.degree = X.max_deg();
        ck.degree_ok = !ck.degree || *ck.degree <= rep.bound;
        ck.lemma_applies = !cd.a.empty() && rg0 <= n - 2;
        if (ck.lemma_applies) {
            rep.lemma_checked++;
            ck.lemma_ok = static_cast<int>(cd.G.size()) + rg0 >= static_cast<int>(cd.a.size()) - 1;
        }
        rep.face_failures += !ck.faces_ok;
        rep.rank_genus_failures += !ck.rank_genus_ok;
        rep.lemma_failures += !ck.lemma_ok;
        if (!ck.degree_ok)
            throw BoundViolation("class a=" + describe(L, cd.a) + " G=" + describe(L, cd.G) + " base " +
                                 describe(L, cd.base.edges()) + " reaches degree " + std::to_string(*ck.degree) +
                                 " above " + std::to_string(rep.bound));
        rep.classes.push_back(ck);
    }
    rep.bracket_degree = fast_bracket(L.cable().diagram, frontier_cap).max_deg();
    if (rep.bracket_degree && *rep.bracket_degree > rep.bound)
        throw BoundViolation("bracket of the cable reaches degree " + std::to_string(*rep.bracket_degree) + " above " +
                             std::to_string(rep.bound));
    return rep;
}

GenusIncrementReport check_genus_increments(const CableLabeling& L, const std::vector<SpanningSubgraph>& hs) {
    GenusIncrementReport rep;
    const RibbonGraph& g = L.ribbon();
    int n = L.n();
    rep.instances_by_region.assign(n, 0);
    rep.holds_by_region.assign(n, 0);
    auto num = [&](int x) { return L.number(x); };
    auto none_between = [&](const SpanningSubgraph& h, int region, int side, int lo, int hi) {
        if (region < 0 || region >= n) return true;
        for (int x : L.edges(region, side ? Side::L : Side::R))
            if (num(x) > lo && num(x) < hi && h.has(x)) return false;
        return true;
    };
    auto unlabeled_near = [&](const SpanningSubgraph& h, int i) {
        for (int x : h.edges()) {
            int r = L.region(x);
            if (!L.label(x) && r >= i - 1 && r <= i + 1 && r >= 0) return true;
        }
        return false;
    };
    for (const auto& h : hs) {
        SubgraphStats s = g.stats(h);
        int before = s.rank() + s.g;
        for (int side = 0; side < 2; ++side)
            for (int i = 0; i + 1 < n; ++i) {
                Side sd = side ? Side::L : Side::R;
                for (int e1 : L.edges(i, sd)) {
                    if (!h.has(e1)) continue;
                    for (int e3 : L.edges(i + 1, sd)) {
                        if (h.has(e3)) continue;
                        int lo = std::min(num(e1), num(e3)), hi = std::max(num(e1), num(e3));
                        if (!none_between(h, i, side, lo, hi) || !none_between(h, i - 1, side, lo, hi)) continue;
                        for (int e2 : L.edges(i, sd)) {
                            if (h.has(e2) || num(e2) <= lo || num(e2) >= hi) continue;
                            int a = std::min(num(e1), num(e2)), b = std::max(num(e1), num(e2));
                            int c2 = std::min(num(e2), num(e3)), d2 = std::max(num(e2), num(e3));
                            if (!none_between(h, i + 1, side, a, b) || !none_between(h, i + 1, side, c2, d2)) continue;
                            SpanningSubgraph h2 = h;
                            h2.set(e2, true);
                            h2.set(e3, true);
                            SubgraphStats s2 = g.stats(h2);
                            bool ok = s2.rank() + s2.g == before + 1;
                            bool guarded = !unlabeled_near(h, i);
                            if (i == 0)
                                for (int x : L.edges(1, side ? Side::R : Side::L))
                                    if (h.has(x) && num(x) >= lo && num(x) <= hi) guarded = false;
                            rep.guarded_instances += guarded;
                            rep.guarded_holds += guarded && ok;
                            rep.instances++;
                            rep.instances_by_region[i]++;
                            if (ok) {
                                rep.holds++;
                                rep.holds_by_region[i]++;
                            } else if (rep.failures.size() < 8) {
                                rep.failures.push_back("H=" + describe(L, h.edges()) + " e1=" + L.name(e1) +
                                                       " e2=" + L.name(e2) + " e3=" + L.name(e3) + " change " +
                                                       std::to_string(s2.rank() + s2.g - before));
                            }
                        }
                    }
                }
            }
    }
    return rep;
}

namespace {

std::string set_string(std::vector<std::string> names, bool sort) {
    if (sort)
        std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
            auto key = [](const std::string& s) {
                bool lettered = !s.empty() && (s[0] == 'R' || s[0] == 'L');
                return std::pair{std::stoi(lettered ? s.substr(1) : s), s};
            };
            return key(a) < key(b);
        });
    std::string s = "{";
    for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
    return s + "}";
}

std::vector<std::string> split_set(const std::string& s) {
    std::vector<std::string> out;
    std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string swap_sides(const std::string& s, bool sort) {
    auto items = split_set(s);
    for (auto& it : items) {
        if (it[0] == 'R')
            it[0] = 'L';
        else if (it[0] == 'L')
            it[0] = 'R';
    }
    return set_string(items, sort);
}

TableRow row(std::string a, std::string bR1, std::string tR0, std::string tL0, std::string bL1, std::string G, int rank,
             int genus) {
    return {a, bR1, tR0, tL0, bL1, G, rank, genus};
}

}  // namespace

TableRow TableRow::reflected() const {
    return {a, swap_sides(b_L1, false), swap_sides(t_L0, false), swap_sides(t_R0, false), swap_sides(b_R1, false),
            swap_sides(G, true), rank, genus};
}

std::string TableRow::to_string() const {
    std::ostringstream os;
    os << "a=" << a << " b(R1)=" << b_R1 << " t(R0)=" << t_R0 << " t(L0)=" << t_L0 << " b(L1)=" << b_L1 << " G=" << G
       << " v-k=" << rank << " g=" << genus;
    return os.str();
}

std::vector<TableRow> expected_table_rows() {
    const std::string E = "{}";
    std::vector<TableRow> t{
        row(E, E, E, E, E, E, 0, 0),
        row(E, E, E, E, E, E, 1, 0),
        row("{1}", E, E, E, E, E, 1, 0),
        row("{1}", E, "{1}", "{1}", E, E, 1, 1),
        row("{3}", "{R2}", E, E, E, E, 1, 0),
        row("{3}", "{R2,3}", "{3}", "{3}", E, E, 1, 1),
        row("{5}", "{R4}", E, E, E, E, 1, 0),
        row("{5}", "{R4,5}", "{5}", "{5}", E, E, 1, 1),
        row("{1,3}", "{R2}", E, E, E, "{R2}", 1, 0),
        row("{1,3}", "{R2,3}", "{3}", "{3}", E, "{R2}", 1, 1),
        row("{1,3}", E, "{1}", "{1}", E, E, 1, 1),
        row("{1,3}", E, "{1}", "{1,L2}", "{L2}", E, 1, 1),
        row("{1,3}", E, "{1}", "{1,L2,3}", "{L2,3}", E, 1, 2),
        row("{1,3}", "{R2}", "{1,R2}", "{1}", E, E, 1, 1),
        row("{1,3}", "{R2}", "{1,R2}", "{1,L2}", "{L2}", E, 1, 1),
        row("{1,3}", "{R2,3}", "{1,R2,3}", "{1}", E, E, 1, 2),
        row("{1,3}", "{R2,3}", "{1,R2,3}", "{1,L2,3}", "{L2,3}", E, 1, 2),
        row("{3,5}", "{R2}", E, E, E, "{R4}", 1, 0),
        row("{3,5}", "{R2,3}", "{3}", "{3}", E, "{5}", 1, 1),
        row("{3,5}", "{R2,3}", "{3}", "{3,L4}", "{L4}", E, 1, 1),
        row("{3,5}", "{R2,3}", "{3}", "{3,L4,5}", "{L4,5}", E, 1, 2),
        row("{3,5}", "{R2,5}", "{5}", "{5}", E, "{R4}", 1, 1),
        row("{3,5}", "{R2,3,R4}", "{3,R4}", "{3}", E, E, 1, 1),
        row("{3,5}", "{R2,3,R4}", "{3,R4}", "{3,L4}", E, E, 1, 1),
        row("{3,5}", "{R2,3,R4,5}", "{3,R4,5}", "{3}", E, E, 1, 1),
        row("{3,5}", "{R2,3,R4,5}", "{3,R4,5}", "{3,L4,5}", E, E, 1, 2),
    };
    // a = {1,3,5}: (b(R1), t(R0)) blocks, each with its (t(L0), b(L1), G, g) rows.
    struct Tail {
        const char *tL0, *bL1, *G;
        int g;
    };
    auto block = [&](const char* bR1, const char* tR0, std::initializer_list<Tail> rows) {
        for (auto& r : rows) t.push_back(row("{1,3,5}", bR1, tR0, r.tL0, r.bL1, r.G, 1, r.g));
    };
    block("{}", "{1}",
          {{"{1}", "{}", "{3,5}", 1},
           {"{1,L2}", "{L2}", "{L4}", 1},
           {"{1,L4}", "{L4}", "{3}", 1},
           {"{1,L2,3}", "{L2,3}", "{5}", 2},
           {"{1,L2,5}", "{L2,5}", "{R4}", 2},
           {"{1,L4,5}", "{L4,5}", "{3}", 2},
           {"{1,L2,3,L4}", "{L2,3,L4}", "{}", 2},
           {"{1,L2,3,L4,5}", "{L2,3,L4,5}", "{}", 3}});
    block("{R2}", "{1,R2}",
          {{"{1}", "{}", "{R4}", 1}, {"{1,L2}", "{L2}", "{R4,L4}", 1}, {"{1,L4}", "{L4}", "{R4}", 1}});
    block("{R4}", "{1,R4}",
          {{"{1}", "{}", "{3}", 1},
           {"{1,L2}", "{L2}", "{L4}", 1},
           {"{1,L4}", "{L4}", "{3}", 1},
           {"{1,L2,3}", "{L2,3}", "{}", 2},
           {"{1,L2,3,L4}", "{L2,3,L4}", "{}", 2}});
    block("{R2,3}", "{1,R2,3}",
          {{"{1}", "{}", "{5}", 2},
           {"{1,L4}", "{L4}", "{}", 2},
           {"{1,L2,3}", "{L2,3}", "{5}", 2},
           {"{1,L4,5}", "{L4,5}", "{}", 3},
           {"{1,L2,3,L4}", "{L2,3,L4}", "{}", 2},
           {"{1,L2,3,L4,5}", "{L2,3,L4,5}", "{}", 3}});
    block("{R2,5}", "{1,R2,5}",
          {{"{1}", "{}", "{R4}", 2}, {"{1,L2,5}", "{L2,5}", "{R4,L4}", 2}, {"{1,L4,5}", "{L4,5}", "{R4}", 2}});
    block("{R4,5}", "{1,R4,5}",
          {{"{1}", "{}", "{3}", 2},
           {"{1,L2,3}", "{L2,3}", "{}", 3},
           {"{1,L2,5}", "{L2,5}", "{}", 2},
           {"{1,L4,5}", "{L4,5}", "{3}", 2},
           {"{1,L2,3,L4,5}", "{L2,3,L4,5}", "{}", 3}});
    block("{R2,3,R4}", "{1,R2,3,R4}",
          {{"{1}", "{}", "{}", 2},
           {"{1,L4}", "{L4}", "{}", 2},
           {"{1,L2,3}", "{L2,3}", "{}", 2},
           {"{1,L2,3,L4}", "{L2,3,L4}", "{}", 2}});
    block("{R2,3,R4,5}", "{1,R2,3,R4,5}",
          {{"{1}", "{}", "{}", 3},
           {"{1,L2,3}", "{L2,3}", "{}", 3},
           {"{1,L4,5}", "{L4,5}", "{}", 3},
           {"{1,L2,3,L4,5}", "{L2,3,L4,5}", "{}", 3}});
    for (auto& r : t) r.G = swap_sides(swap_sides(r.G, true), true);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

std::vector<TableRow> realized_table_rows(const CableLabeling& L, const std::vector<ClassDescriptor>& classes) {
    if (L.n() != 3) throw NotApplicable("the class table is laid out for n = 3");
    auto names = [&](const std::vector<int>& xs, bool sort) {
        std::vector<std::string> v;
        for (int x : xs) v.push_back(L.name(x));
        return set_string(v, sort);
    };
    std::set<TableRow> rows;
    for (const auto& cd : classes) {
        if (cd.base_stats.rank() > 1) continue;
        const auto& r = cd.analysis;
        TableRow row{names(r.a, true),          names(r.seq[0][1].b, false), names(r.seq[0][0].t, false),
                     names(r.seq[1][0].t, false), names(r.seq[1][1].b, false), names(r.G, true),
                     cd.base_stats.rank(),        cd.base_stats.g};
        // The table lists starts on the right; left starts are its mirror.
        rows.insert(!r.a.empty() && r.side == Side::L ? row.reflected() : row);
    }
    return {rows.begin(), rows.end()};
}

nlohmann::json TableComparison::to_json() const {
    nlohmann::json j;
    j["reflected"] = reflected;
    auto list = [](const std::vector<TableRow>& rs) {
        nlohmann::json a = nlohmann::json::array();
        for (auto& r : rs) a.push_back(r.to_string());
        return a;
    };
    j["matched"] = matched.size();
    j["missing"] = list(missing);
    j["extra"] = list(extra);
    j["exact"] = exact();
    return j;
}

TableComparison compare_table(const std::vector<TableRow>& realized) {
    auto expected = expected_table_rows();
    std::set<TableRow> want(expected.begin(), expected.end());
    TableComparison best;
    for (bool refl : {false, true}) {
        TableComparison cmp;
        cmp.reflected = refl;
        std::set<TableRow> got;
        for (auto& r : realized) got.insert(refl ? r.reflected() : r);
        for (auto& r : got) (want.count(r) ? cmp.matched : cmp.extra).push_back(r);
        for (auto& r : want)
            if (!got.count(r)) cmp.missing.push_back(r);
        if (!refl || cmp.matched.size() > best.matched.size()) best = cmp;
    }
    return best;
}

}  // namespace joneslab
