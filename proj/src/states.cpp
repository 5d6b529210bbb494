#include "joneslab/states.hpp"

#include <algorithm>

#include "joneslab/errors.hpp"

namespace joneslab {

KauffmanState KauffmanState::from_mask(int c, std::uint64_t mask) {
    KauffmanState s(c);
    for (int i = 0; i < c; ++i) s.bits_[i] = (mask >> i) & 1;
    return s;
}

KauffmanState KauffmanState::from_bits(std::vector<bool> bits) {
    KauffmanState s;
    s.bits_ = std::move(bits);
    return s;
}

int KauffmanState::b_count() const { return static_cast<int>(std::count(bits_.begin(), bits_.end(), true)); }

KauffmanState dual(const KauffmanState& s) {
    std::vector<bool> b = s.bits();
    b.flip();
    return KauffmanState::from_bits(std::move(b));
}

int StateGraph::circle_of(int crossing, int corner) const {
    const auto& e = edges[crossing];
    int k = (corner == 0 || corner == 1) ? 0 : 1;
    return e[k].circle;
}

nlohmann::json StateGraph::to_json() const {
    nlohmann::json j;
    j["circles"] = nlohmann::json::array();
    for (std::size_t c = 0; c < circles.size(); ++c) {
        auto att = nlohmann::json::array();
        for (auto& a : circles[c]) att.push_back({{"crossing", a.crossing}, {"corner", a.corner}, {"side", a.left ? "L" : "R"}});
        j["circles"].push_back({{"id", c}, {"attachments", att}});
    }
    j["edges"] = nlohmann::json::array();
    for (std::size_t x = 0; x < edges.size(); ++x)
        j["edges"].push_back({{"crossing", x},
                              {"ends", {{edges[x][0].circle, edges[x][0].position},
                                        {edges[x][1].circle, edges[x][1].position}}}});
    return j;
}

StateGraph resolve(const Diagram& d, const KauffmanState& s) {
    int c = d.crossing_count();
    if (s.size() != c) throw InvalidN("state length does not match crossing count");
    // Smoothing partner of each dart 4x + slot.
    std::vector<int> sp(4 * c);
    for (int x = 0; x < c; ++x) {
        int first = s.is_B(x) ? 1 : 0;
        for (int k : {first, first + 2}) {
            int a = 4 * x + k % 4, b = 4 * x + (k + 1) % 4;
            sp[a] = b;
            sp[b] = a;
        }
    }
    StateGraph g;
    g.edges.assign(c, {EdgeEnd{-1, -1}, EdgeEnd{-1, -1}});
    std::vector<char> seen(4 * c, 0);
    for (int start = 0; start < 4 * c; ++start) {
        if (seen[start]) continue;
        int id = g.circle_count();
        g.circles.emplace_back();
        auto& circ = g.circles.back();
        int cur = start;
        do {
            int p = sp[cur];
            seen[cur] = seen[p] = 1;
            int x = cur / 4, from = cur % 4, to = p % 4;
            bool left = to == (from + 1) % 4;
            int corner = left ? from : to;
            int k = (corner == 0 || corner == 1) ? 0 : 1;
            g.edges[x][k] = {id, static_cast<int>(circ.size())};
            circ.push_back({x, corner, left});
            ArcEnd o = d.across(x, to);
            cur = 4 * o.crossing + o.slot;
        } while (cur != start);
    }
    for (int u = 0; u < d.unknots(); ++u) g.circles.emplace_back();
    return g;
}

CircleCounter::CircleCounter(const Diagram& d)
    : crossings_(d.crossing_count()), arcs_(d.arc_count()), unknots_(d.unknots()) {
    for (auto& cr : d.crossings()) slots_.push_back(cr.arcs);
}

namespace {

int find(std::vector<int>& p, int x) {
    while (p[x] != x) {
        p[x] = p[p[x]];
        x = p[x];
    }
    return x;
}

}  // namespace

int CircleCounter::label(const std::vector<bool>& b_bits, std::vector<int>& root) const {
    root.resize(arcs_ + 1);
    for (int a = 0; a <= arcs_; ++a) root[a] = a;
    int comps = arcs_;
    for (int x = 0; x < crossings_; ++x) {
        const auto& s = slots_[x];
        int first = b_bits[x] ? 1 : 0;
        for (int k : {first, first + 2}) {
            int u = find(root, s[k % 4]), v = find(root, s[(k + 1) % 4]);
            if (u != v) {
                root[u] = v;
                --comps;
            }
        }
    }
    for (int a = 1; a <= arcs_; ++a) root[a] = find(root, a);
    return comps + unknots_;
}

int CircleCounter::count(const std::vector<bool>& b_bits) const {
    thread_local std::vector<int> root;
    return label(b_bits, root);
}

int CircleCounter::count(std::uint64_t mask) const {
    thread_local std::vector<int> p;
    p.resize(arcs_ + 1);
    for (int a = 0; a <= arcs_; ++a) p[a] = a;
    int comps = arcs_;
    for (int x = 0; x < crossings_; ++x) {
        const auto& s = slots_[x];
        int first = (mask >> x) & 1;
        for (int k : {first, first + 2}) {
            int u = find(p, s[k % 4]), v = find(p, s[(k + 1) % 4]);
            if (u != v) {
                p[u] = v;
                --comps;
            }
        }
    }
    return comps + unknots_;
}

int count_circles(const Diagram& d, const KauffmanState& s) {
    if (s.size() != d.crossing_count()) throw InvalidN("state length does not match crossing count");
    return CircleCounter(d).count(s.bits());
}

Adequacy is_A_adequate(const Diagram& d) {
    Adequacy r;
    StateGraph g = resolve(d, KauffmanState::all_A(d.crossing_count()));
    for (int x = 0; x < d.crossing_count(); ++x)
        if (g.is_loop(x)) r.loops.push_back(x);
    r.adequate = r.loops.empty();
    if (!r.adequate) r.witness = r.loops.front();
    return r;
}

bool is_B_adequate(const Diagram& d) { return is_A_adequate(mirror(d)).adequate; }

}  // namespace joneslab
