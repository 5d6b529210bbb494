#include "joneslab/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

#include "joneslab/errors.hpp"
#include "union_find.hpp"

namespace joneslab {

namespace {

bool slot_is_in(int slot, int over_in) {
    if (slot == 0) return true;
    if (slot == 2) return false;
    return slot == over_in;
}

}  // namespace

ArcEnd Diagram::across(int crossing, int slot) const {
    int a = crossings_[crossing].arcs[slot];
    ArcEnd here{crossing, slot};
    return tail_[a] == here ? head_[a] : tail_[a];
}

void Diagram::index_arcs() {
    tail_.assign(arc_count_ + 1, ArcEnd{});
    head_.assign(arc_count_ + 1, ArcEnd{});
    for (int x = 0; x < crossing_count(); ++x) {
        const auto& cr = crossings_[x];
        for (int s = 0; s < 4; ++s) {
            int a = cr.arcs[s];
            auto& slot = slot_is_in(s, cr.over_in) ? head_[a] : tail_[a];
            if (slot.crossing >= 0) throw ValidationError("inconsistent orientation at arc " + std::to_string(a));
            slot = {x, s};
        }
    }
}

void Diagram::check_orientation() const {
    for (int a = 1; a <= arc_count_; ++a)
        if (tail_[a].crossing < 0 || head_[a].crossing < 0)
            throw ValidationError("inconsistent orientation at arc " + std::to_string(a));
}

int face_count(const Diagram& d) {
    int c = d.crossing_count();
    std::vector<char> seen(4 * c, 0);
    int faces = 0;
    for (int start = 0; start < 4 * c; ++start) {
        if (seen[start]) continue;
        ++faces;
        int dart = start;
        while (!seen[dart]) {
            seen[dart] = 1;
            ArcEnd o = d.across(dart / 4, dart % 4);
            dart = 4 * o.crossing + (o.slot + 1) % 4;
        }
    }
    return faces;
}

void Diagram::check_planar() const {
    int c = crossing_count();
    if (c == 0) return;
    UnionFind uf(c);
    for (int a = 1; a <= arc_count_; ++a) uf.unite(tail_[a].crossing, head_[a].crossing);
    int pieces = uf.count();
    if (face_count(*this) != c + 2 * pieces) throw ValidationError("code does not describe a planar diagram");
}

Diagram Diagram::from_pd(const std::vector<std::array<int, 4>>& slots, int unknots) {
    if (unknots < 0) throw ValidationError("negative unknot count");
    int c = static_cast<int>(slots.size());
    int max_label = 0;
    for (auto& x : slots)
        for (int a : x) {
            if (a < 1) throw ValidationError("arc labels must be positive");
            max_label = std::max(max_label, a);
        }
    std::vector<std::vector<ArcEnd>> ends(max_label + 1);
    for (int x = 0; x < c; ++x)
        for (int s = 0; s < 4; ++s) ends[slots[x][s]].push_back({x, s});
    for (int a = 1; a <= max_label; ++a)
        if (ends[a].size() != 2)
            throw ValidationError("arc " + std::to_string(a) + " used " + std::to_string(ends[a].size()) +
                                  " times");

    // Orientation: under strands are known; propagate along arcs.
    std::vector<int> over_in(c, 0);
    auto known = [&](ArcEnd e) { return e.slot % 2 == 0 || over_in[e.crossing] != 0; };
    auto is_in = [&](ArcEnd e) { return slot_is_in(e.slot, over_in[e.crossing]); };
    std::vector<int> work;
    for (int a = 1; a <= max_label; ++a) work.push_back(a);
    auto propagate = [&]() {
        while (!work.empty()) {
            int a = work.back();
            work.pop_back();
            ArcEnd e0 = ends[a][0], e1 = ends[a][1];
            bool k0 = known(e0), k1 = known(e1);
            if (k0 && k1) {
                if (is_in(e0) == is_in(e1)) throw ValidationError("inconsistent orientation at arc " + std::to_string(a));
                continue;
            }
            if (!k0 && !k1) continue;
            ArcEnd from = k0 ? e0 : e1, to = k0 ? e1 : e0;
            bool want_in = !is_in(from);
            // to.slot is 1 or 3 here
            over_in[to.crossing] = want_in ? to.slot : (to.slot + 2) % 4;
            for (int s = 0; s < 4; ++s) work.push_back(slots[to.crossing][s]);
        }
    };
    propagate();
    for (int x = 0; x < c; ++x) {
        if (over_in[x] != 0) continue;
        // Over-only strands: arc labels increase along the orientation.
        int b = slots[x][1], dd = slots[x][3];
        bool d_to_b = (b - dd == 1) || (dd - b > 1);
        over_in[x] = d_to_b ? 3 : 1;
        for (int s = 0; s < 4; ++s) work.push_back(slots[x][s]);
        propagate();
    }

    Diagram d;
    d.unknots_ = unknots;
    d.arc_count_ = max_label;
    for (int x = 0; x < c; ++x) d.crossings_.push_back({slots[x], over_in[x] == 3 ? 1 : -1, over_in[x]});
    d.index_arcs();
    d.check_orientation();
    d.check_planar();
    return d;
}

Diagram Diagram::from_oriented(const std::vector<std::array<int, 4>>& slots, const std::vector<int>& over_in,
                               int unknots, bool relabel) {
    Diagram d;
    d.unknots_ = unknots;
    int max_label = 0;
    for (auto& x : slots)
        for (int a : x) max_label = std::max(max_label, a);
    d.arc_count_ = max_label;
    for (std::size_t x = 0; x < slots.size(); ++x) {
        if (over_in[x] != 1 && over_in[x] != 3) throw ValidationError("over strand must enter at slot 1 or 3");
        d.crossings_.push_back({slots[x], over_in[x] == 3 ? 1 : -1, over_in[x]});
    }
    std::vector<int> uses(max_label + 1, 0);
    for (auto& x : slots)
        for (int a : x) {
            if (a < 1) throw ValidationError("arc labels must be positive");
            ++uses[a];
        }
    for (int a = 1; a <= max_label; ++a)
        if (uses[a] != 2) throw ValidationError("arc " + std::to_string(a) + " not used exactly twice");
    d.index_arcs();
    d.check_orientation();
    d.check_planar();
    return relabel ? relabeled(d) : d;
}

std::vector<std::vector<Visit>> Diagram::gauss_words() const {
    std::vector<std::vector<Visit>> words;
    std::vector<char> seen(arc_count_ + 1, 0);
    auto walk = [&](int start) {
        std::vector<Visit> w;
        int a = start;
        while (!seen[a]) {
            seen[a] = 1;
            ArcEnd h = head_[a];
            w.push_back({h.crossing, h.slot != 0});
            a = crossings_[h.crossing].arcs[(h.slot + 2) % 4];
        }
        words.push_back(std::move(w));
    };
    for (int x = 0; x < crossing_count(); ++x)
        for (int s : {0, crossings_[x].over_in}) {
            int a = crossings_[x].arcs[s];
            if (!seen[a]) walk(a);
        }
    return words;
}

int Diagram::component_count() const { return static_cast<int>(gauss_words().size()) + unknots_; }

Diagram relabeled(const Diagram& d) {
    std::vector<int> label(d.arc_count() + 1, 0);
    int next = 1;
    for (auto& word : d.gauss_words()) {
        // The word starts with the head of its first arc; recover that arc.
        const Visit& first = word.front();
        const Crossing& cr = d.crossing(first.crossing);
        int in_slot = first.over ? cr.over_in : 0;
        int a = cr.arcs[in_slot];
        for (std::size_t k = 0; k < word.size(); ++k) {
            label[a] = next++;
            ArcEnd h = d.arc_head(a);
            a = d.crossing(h.crossing).arcs[(h.slot + 2) % 4];
        }
    }
    std::vector<std::array<int, 4>> slots;
    std::vector<int> over_in;
    for (auto& cr : d.crossings()) {
        std::array<int, 4> s{};
        for (int k = 0; k < 4; ++k) s[k] = label[cr.arcs[k]];
        slots.push_back(s);
        over_in.push_back(cr.over_in);
    }
    return Diagram::from_oriented(slots, over_in, d.unknots(), false);
}

namespace {

struct Parser {
    std::string_view s;
    std::size_t i = 0;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char ch) {
        skip();
        return i < s.size() && s[i] == ch;
    }
    void expect(char ch) {
        skip();
        if (i >= s.size() || s[i] != ch)
            throw SyntaxError(std::string("expected '") + ch + "' at offset " + std::to_string(i));
        ++i;
    }
    int number() {
        skip();
        std::size_t st = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (st == i) throw SyntaxError("expected a number at offset " + std::to_string(st));
        if (i - st > 9) throw SyntaxError("number too large at offset " + std::to_string(st));
        return std::stoi(std::string(s.substr(st, i - st)));
    }
};

}  // namespace

Diagram parse_pd(std::string_view text) {
    Parser p{text};
    int unknots = 0;
    if (p.peek('U')) {
        ++p.i;
        unknots = p.number();
    }
    p.expect('P');
    p.expect('D');
    p.expect('[');
    std::vector<std::array<int, 4>> slots;
    if (!p.peek(']')) {
        while (true) {
            p.expect('X');
            p.expect('[');
            std::array<int, 4> x{};
            for (int k = 0; k < 4; ++k) {
                if (k) p.expect(',');
                x[k] = p.number();
            }
            p.expect(']');
            slots.push_back(x);
            if (p.peek(',')) {
                ++p.i;
                continue;
            }
            break;
        }
    }
    p.expect(']');
    p.skip();
    if (p.i != text.size()) throw SyntaxError("trailing characters at offset " + std::to_string(p.i));
    return Diagram::from_pd(slots, unknots);
}

std::string render_pd(const Diagram& d) {
    std::string s;
    if (d.unknots() > 0) s += "U" + std::to_string(d.unknots()) + " ";
    s += "PD[";
    for (int x = 0; x < d.crossing_count(); ++x) {
        if (x) s += ",";
        const auto& a = d.crossing(x).arcs;
        s += "X[" + std::to_string(a[0]) + "," + std::to_string(a[1]) + "," + std::to_string(a[2]) + "," +
             std::to_string(a[3]) + "]";
    }
    return s + "]";
}

nlohmann::json diagram_to_json(const Diagram& d) {
    nlohmann::json j;
    j["pd"] = nlohmann::json::array();
    j["signs"] = nlohmann::json::array();
    for (auto& cr : d.crossings()) {
        j["pd"].push_back(cr.arcs);
        j["signs"].push_back(cr.sign);
    }
    j["unknots"] = d.unknots();
    return j;
}

Diagram diagram_from_json(const nlohmann::json& j) {
    std::vector<std::array<int, 4>> slots;
    try {
        for (auto& x : j.at("pd")) slots.push_back(x.get<std::array<int, 4>>());
        return Diagram::from_pd(slots, j.value("unknots", 0));
    } catch (const nlohmann::json::exception& e) {
        throw SyntaxError(e.what());
    }
}

int writhe(const Diagram& d) {
    int w = 0;
    for (auto& cr : d.crossings()) w += cr.sign;
    return w;
}

Diagram mirror(const Diagram& d) {
    std::vector<std::array<int, 4>> slots;
    std::vector<int> over_in;
    for (auto& cr : d.crossings()) {
        // The old over strand becomes the under strand; start at its incoming slot.
        int r = cr.over_in;
        const auto& a = cr.arcs;
        slots.push_back({a[r], a[(r + 1) % 4], a[(r + 2) % 4], a[(r + 3) % 4]});
        // Old under strand (old slots 0 -> 2) now sits at new slots (4 - r) -> (6 - r).
        over_in.push_back((4 - r) % 4);
    }
    return Diagram::from_oriented(slots, over_in, d.unknots(), false);
}

bool is_nugatory(const Diagram& d, int crossing) {
    auto words = d.gauss_words();
    int comp = -1;
    std::vector<int> pos;
    for (int w = 0; w < static_cast<int>(words.size()); ++w)
        for (int k = 0; k < static_cast<int>(words[w].size()); ++k)
            if (words[w][k].crossing == crossing) {
                comp = (comp < 0 || comp == w) ? w : -2;
                pos.push_back(k);
            }
    if (comp < 0) return false;  // two different components meet here
    // Pieces: 0 = word strictly between the occurrences, 1 = the rest of the
    // word, 2 + w = every other component.
    const auto& word = words[comp];
    UnionFind uf(2 + static_cast<int>(words.size()));
    std::vector<int> first_piece(d.crossing_count(), -1);
    auto touch = [&](int x, int piece) {
        if (x == crossing) return;
        if (first_piece[x] < 0)
            first_piece[x] = piece;
        else
            uf.unite(first_piece[x], piece);
    };
    for (int k = 0; k < static_cast<int>(word.size()); ++k) {
        if (k == pos[0] || k == pos[1]) continue;
        touch(word[k].crossing, (k > pos[0] && k < pos[1]) ? 0 : 1);
    }
    for (int w = 0; w < static_cast<int>(words.size()); ++w)
        if (w != comp)
            for (auto& v : words[w]) touch(v.crossing, 2 + w);
    return uf.find(0) != uf.find(1);
}

bool is_reduced(const Diagram& d) {
    for (int x = 0; x < d.crossing_count(); ++x)
        if (is_nugatory(d, x)) return false;
    return true;
}

int Cable::index_of(int crossing, int x, int y) const {
    int j = diagram.crossing(crossing * n * n).sign > 0 ? n + 1 - y : y;
    return crossing * n * n + (x - 1) * n + (j - 1);
}

Cable cable(const Diagram& d, int n) {
    if (n < 1) throw InvalidN("cable index must be at least 1");
    int c = d.crossing_count();
    int nn = n * n;
    auto pos = [&](int sign, int copy) { return sign > 0 ? n + 1 - copy : copy; };
    auto cell_index = [&](int x0, int gx, int gy) {
        int j = pos(d.crossing(x0).sign, gy);  // pos is an involution
        return x0 * nn + (gx - 1) * n + (j - 1);
    };
    // Darts of the cabled diagram: 4 * crossing + slot.
    std::vector<int> partner(4 * c * nn, -1);
    auto link = [&](int a, int b) {
        partner[a] = b;
        partner[b] = a;
    };
    for (int x0 = 0; x0 < c; ++x0)
        for (int gx = 1; gx <= n; ++gx)
            for (int gy = 1; gy <= n; ++gy) {
                int id = cell_index(x0, gx, gy);
                if (gx < n) link(4 * id + 1, 4 * cell_index(x0, gx + 1, gy) + 3);
                if (gy < n) link(4 * id + 2, 4 * cell_index(x0, gx, gy + 1) + 0);
            }
    auto boundary = [&](ArcEnd e, int copy) {
        int sign = d.crossing(e.crossing).sign;
        switch (e.slot) {
            case 0: return 4 * cell_index(e.crossing, copy, 1) + 0;
            case 2: return 4 * cell_index(e.crossing, copy, n) + 2;
            case 1: return 4 * cell_index(e.crossing, n, pos(sign, copy)) + 1;
            default: return 4 * cell_index(e.crossing, 1, pos(sign, copy)) + 3;
        }
    };
    for (int a = 1; a <= d.arc_count(); ++a)
        for (int k = 1; k <= n; ++k) link(boundary(d.arc_tail(a), k), boundary(d.arc_head(a), k));

    std::vector<int> seg(4 * c * nn, 0);
    int next = 1;
    for (std::size_t dart = 0; dart < partner.size(); ++dart)
        if (!seg[dart]) seg[dart] = seg[partner[dart]] = next++;
    std::vector<std::array<int, 4>> slots(c * nn);
    std::vector<int> over_in(c * nn);
    Cable out;
    out.n = n;
    out.cells.resize(c * nn);
    for (int x0 = 0; x0 < c; ++x0)
        for (int gx = 1; gx <= n; ++gx)
            for (int gy = 1; gy <= n; ++gy) {
                int id = cell_index(x0, gx, gy);
                for (int s = 0; s < 4; ++s) slots[id][s] = seg[4 * id + s];
                over_in[id] = d.crossing(x0).over_in;
                out.cells[id] = {x0, gx, pos(d.crossing(x0).sign, gy), gx, gy};
            }
    out.diagram = Diagram::from_oriented(slots, over_in, n * d.unknots(), true);
    return out;
}

std::vector<int> arc_components(const Diagram& d) {
    std::vector<int> comp(d.arc_count() + 1, -1);
    int next = 0;
    for (int a = 1; a <= d.arc_count(); ++a) {
        if (comp[a] >= 0) continue;
        for (int b = a; comp[b] < 0;) {
            comp[b] = next;
            ArcEnd h = d.arc_head(b);
            b = d.crossing(h.crossing).arcs[(h.slot + 2) % 4];
        }
        ++next;
    }
    return comp;
}

Diagram cable(const Diagram& d, const std::vector<int>& copies) {
    std::vector<int> comp = arc_components(d);
    int through = comp.size() > 1 ? *std::max_element(comp.begin() + 1, comp.end()) + 1 : 0;
    if (static_cast<int>(copies.size()) != through + d.unknots())
        throw InvalidN("cable needs one copy count per component");
    for (int k : copies)
        if (k < 0) throw InvalidN("copy counts must be non-negative");
    int c = d.crossing_count();
    // Grid of crossing x0: under copies along x, positions along the under
    // strand along y; the over copy at height y is pos(y).
    std::vector<int> nu(c), no(c), first(c + 1, 0);
    for (int x0 = 0; x0 < c; ++x0) {
        const Crossing& x = d.crossing(x0);
        nu[x0] = copies[comp[x.arcs[0]]];
        no[x0] = copies[comp[x.arcs[x.over_in]]];
        first[x0 + 1] = first[x0] + nu[x0] * no[x0];
    }
    int cells = first[c];
    auto pos = [&](int x0, int copy) { return d.crossing(x0).sign > 0 ? no[x0] + 1 - copy : copy; };
    auto cell_index = [&](int x0, int gx, int gy) { return first[x0] + (gx - 1) * no[x0] + (pos(x0, gy) - 1); };

    // Darts 0 .. 4 cells - 1 belong to cabled crossings. A crossing with an
    // empty grid passes each surviving strand straight through; those
    // passages are pairs of virtual darts joined by `through`.
    std::vector<int> partner(4 * cells, -1), pass(4 * cells, -1);
    std::map<std::array<int, 3>, int> virtual_dart;
    auto fresh = [&] {
        partner.push_back(-1);
        pass.push_back(-1);
        return static_cast<int>(partner.size()) - 1;
    };
    auto boundary = [&](ArcEnd e, int copy) {
        int x0 = e.crossing;
        if (nu[x0] && no[x0]) {
            switch (e.slot) {
                case 0: return 4 * cell_index(x0, copy, 1) + 0;
                case 2: return 4 * cell_index(x0, copy, no[x0]) + 2;
                case 1: return 4 * cell_index(x0, nu[x0], pos(x0, copy)) + 1;
                default: return 4 * cell_index(x0, 1, pos(x0, copy)) + 3;
            }
        }
        auto [it, added] = virtual_dart.try_emplace({x0, e.slot, copy}, 0);
        if (added) {
            int a = fresh(), b = fresh();
            pass[a] = b;
            pass[b] = a;
            it->second = a;
            virtual_dart[{x0, (e.slot + 2) % 4, copy}] = b;
        }
        return it->second;
    };
    for (int x0 = 0; x0 < c; ++x0) {
        if (!nu[x0] || !no[x0]) continue;
        for (int gx = 1; gx <= nu[x0]; ++gx)
            for (int gy = 1; gy <= no[x0]; ++gy) {
                int id = cell_index(x0, gx, gy);
                if (gx < nu[x0]) {
                    int right = cell_index(x0, gx + 1, gy);
                    partner[4 * id + 1] = 4 * right + 3;
                    partner[4 * right + 3] = 4 * id + 1;
                }
                if (gy < no[x0]) {
                    int above = cell_index(x0, gx, gy + 1);
                    partner[4 * id + 2] = 4 * above + 0;
                    partner[4 * above + 0] = 4 * id + 2;
                }
            }
    }
    for (int a = 1; a <= d.arc_count(); ++a)
        for (int k = 1; k <= copies[comp[a]]; ++k) {
            int t = boundary(d.arc_tail(a), k), h = boundary(d.arc_head(a), k);
            partner[t] = h;
            partner[h] = t;
        }

    std::vector<int> seg(partner.size(), 0);
    int next = 1, loops = 0;
    for (int dart = 0; dart < 4 * cells; ++dart) {
        if (seg[dart]) continue;
        int end = partner[dart];
        while (end >= 4 * cells) {
            seg[end] = seg[pass[end]] = -1;
            end = partner[pass[end]];
        }
        seg[dart] = seg[end] = next++;
    }
    for (std::size_t dart = 4 * cells; dart < partner.size(); ++dart) {
        if (seg[dart]) continue;
        ++loops;
        for (int v = static_cast<int>(dart); !seg[v]; v = partner[pass[v]]) seg[v] = seg[pass[v]] = -1;
    }
    std::vector<std::array<int, 4>> slots(cells);
    std::vector<int> over_in(cells);
    for (int x0 = 0; x0 < c; ++x0)
        for (int id = first[x0]; id < first[x0 + 1]; ++id) {
            for (int s = 0; s < 4; ++s) slots[id][s] = seg[4 * id + s];
            over_in[id] = d.crossing(x0).over_in;
        }
    int unknots = loops;
    for (int u = 0; u < d.unknots(); ++u) unknots += copies[through + u];
    return Diagram::from_oriented(slots, over_in, unknots, true);
}

}  // namespace joneslab
