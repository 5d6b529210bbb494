#include "joneslab/ingest.hpp"

#include <algorithm>
#include <boost/tokenizer.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "joneslab/errors.hpp"
#include "joneslab/states.hpp"

namespace joneslab {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

LoadedTable read_table(std::istream& in, const std::string& provenance) {
    using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;
    LoadedTable t;
    std::set<std::string> names;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || trim(line)[0] == '#') continue;
        std::vector<std::string> cols;
        try {
            Tokenizer tok(line, boost::escaped_list_separator<char>('\\', ',', '"'));
            for (const auto& c : tok) cols.push_back(trim(c));
        } catch (const boost::escaped_list_error& e) {
            t.errors.push_back({lineno, std::string("bad CSV quoting: ") + e.what()});
            continue;
        }
        if (lineno == 1 && !cols.empty() && cols[0] == "name") continue;
        if (cols.size() < 2 || cols.size() > 3) {
            t.errors.push_back({lineno, "expected name,pd_code,notes"});
            continue;
        }
        if (cols[0].empty()) {
            t.errors.push_back({lineno, "empty name"});
            continue;
        }
        if (!names.insert(cols[0]).second)
            throw DuplicateName("name '" + cols[0] + "' repeated at line " + std::to_string(lineno));
        try {
            t.entries.push_back({cols[0], parse_pd(cols[1]), provenance, cols.size() > 2 ? cols[2] : ""});
        } catch (const Error& e) {
            t.errors.push_back({lineno, cols[0] + ": " + e.what()});
        }
    }
    return t;
}

LoadedTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    return read_table(in, path);
}

const TableEntry& find_entry(const std::vector<TableEntry>& entries, const std::string& name) {
    for (const auto& e : entries)
        if (e.name == name) return e;
    throw ValidationError("no entry named '" + name + "'");
}

nlohmann::json StoreRecord::to_json() const {
    return {{"name", name},   {"color", color},         {"engine", engine}, {"polynomial", polynomial},
            {"degree", degree}, {"timestamp", timestamp}, {"version", version}};
}

StoreRecord StoreRecord::from_json(const nlohmann::json& j) {
    StoreRecord r;
    r.name = j.at("name").get<std::string>();
    r.color = j.at("color").get<int>();
    r.engine = j.at("engine").get<std::string>();
    r.polynomial = j.at("polynomial");
    r.degree = j.value("degree", nlohmann::json());
    r.timestamp = j.value("timestamp", "");
    r.version = j.value("version", "");
    return r;
}

ResultStore::ResultStore(std::string path) : path_(std::move(path)) {}

std::string ResultStore::default_path() {
    const char* env = std::getenv("JONESLAB_STORE");
    return env && *env ? env : "joneslab-store.ndjson";
}

std::vector<StoreRecord> ResultStore::records() const {
    std::lock_guard lock(mu_);
    std::vector<StoreRecord> out;
    std::ifstream in(path_);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            out.push_back(StoreRecord::from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path_ + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::optional<StoreRecord> ResultStore::find(const std::string& name, int color, const std::string& engine) const {
    for (auto& r : records())
        if (r.name == name && r.color == color && r.engine == engine) return r;
    return std::nullopt;
}

bool ResultStore::put(StoreRecord r) {
    if (auto old = find(r.name, r.color, r.engine)) {
        if (old->polynomial != r.polynomial || old->degree != r.degree)
            throw StoreMismatch("recomputed " + r.name + " color " + std::to_string(r.color) + " (" + r.engine +
                                ") differs from the stored record of " + old->timestamp);
        return false;
    }
    if (r.timestamp.empty()) {
        std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm utc{};
        gmtime_r(&now, &utc);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
        r.timestamp = buf;
    }
    if (r.version.empty()) r.version = library_version;
    std::lock_guard lock(mu_);
    std::ofstream out(path_, std::ios::app);
    if (!out) throw ValidationError("cannot write " + path_);
    out << r.to_json().dump() << '\n';
    return true;
}

namespace {

// Faces of a partial map; unmatched darts (alpha[d] == -1) act as pendant
// edges, so matching two of them keeps the map planar iff they share a face.
std::vector<int> face_ids(const std::vector<int>& alpha, int darts) {
    std::vector<int> face(darts, -1);
    int f = 0;
    for (int d = 0; d < darts; ++d) {
        if (face[d] >= 0) continue;
        for (int x = d; face[x] < 0;) {
            face[x] = f;
            int y = alpha[x] < 0 ? x : alpha[x];
            x = (y & ~3) | ((y + 1) & 3);
        }
        ++f;
    }
    return face;
}

void extend(int c, int vertices, std::vector<int>& alpha, std::vector<Projection>& out) {
    int darts = 4 * vertices;
    int d = 0;
    while (d < darts && alpha[d] >= 0) ++d;
    if (d == darts) {
        if (vertices == c) out.push_back({c, std::vector<int>(alpha.begin(), alpha.begin() + darts)});
        return;
    }
    auto face = face_ids(alpha, darts);
    for (int e = d + 1; e < darts; ++e) {
        if (alpha[e] >= 0 || face[e] != face[d]) continue;
        alpha[d] = e;
        alpha[e] = d;
        extend(c, vertices, alpha, out);
        alpha[d] = alpha[e] = -1;
    }
    if (vertices < c) {
        alpha[d] = darts;
        alpha[darts] = d;
        extend(c, vertices + 1, alpha, out);
        alpha[d] = alpha[darts] = -1;
    }
}

// Relabels the map from root dart r in the order the generator would have
// built it; returns alpha in the new labels and the old vertex of each new
// vertex with its entry offset.
struct Relabel {
    std::vector<int> alpha;
    std::vector<std::pair<int, int>> origin;  // (old vertex, old entry dart offset)
};

Relabel relabel_from(const Projection& p, int r) {
    int n = 4 * p.vertices;
    std::vector<int> to_new(n, -1), to_old(n, -1);
    Relabel rl;
    int next = 0;
    auto open_vertex = [&](int entry) {
        int v = entry / 4;
        rl.origin.push_back({v, entry % 4});
        for (int s = 0; s < 4; ++s) {
            int old = 4 * v + (entry + s) % 4;
            to_new[old] = next + s;
            to_old[next + s] = old;
        }
        next += 4;
    };
    open_vertex(r);
    for (int d = 0; d < next; ++d) {
        int partner = p.alpha[to_old[d]];
        if (to_new[partner] < 0) open_vertex(partner);
    }
    rl.alpha.resize(n);
    for (int d = 0; d < n; ++d) rl.alpha[d] = to_new[p.alpha[to_old[d]]];
    return rl;
}

// Smallest relabeled code over all roots, with the over bits carried along
// relative to each vertex's entry dart.
std::vector<int> canonical_key(const Projection& p, std::optional<std::uint64_t> mask) {
    std::vector<int> best;
    for (int r = 0; r < 4 * p.vertices; ++r) {
        Relabel rl = relabel_from(p, r);
        std::vector<int> key = rl.alpha;
        if (mask)
            for (auto [v, off] : rl.origin) key.push_back(static_cast<int>(((*mask >> v) & 1) ^ (off & 1)));
        if (best.empty() || key < best) best = std::move(key);
    }
    return best;
}

// Map of a diagram without crossingless components; over strands run through
// slots 1 and 3, so every bit of the mask is set.
Projection projection_of(const Diagram& d) {
    Projection p{d.crossing_count(), std::vector<int>(4 * d.crossing_count(), -1)};
    for (int a = 1; a <= d.arc_count(); ++a) {
        ArcEnd t = d.arc_tail(a), h = d.arc_head(a);
        int x = 4 * t.crossing + t.slot, y = 4 * h.crossing + h.slot;
        p.alpha[x] = y;
        p.alpha[y] = x;
    }
    return p;
}

}  // namespace

std::vector<Projection> rooted_projections(int c) {
    if (c < 1) throw InvalidN("projections need at least one crossing");
    std::vector<int> alpha(4 * c, -1);
    std::vector<Projection> out;
    extend(c, 1, alpha, out);
    return out;
}

std::vector<Projection> projections(int c) {
    std::set<std::vector<int>> seen;
    std::vector<Projection> out;
    for (auto& p : rooted_projections(c))
        if (seen.insert(canonical_key(p, std::nullopt)).second) out.push_back(std::move(p));
    return out;
}

Diagram realize(const Projection& p, std::uint64_t over_mask) {
    int n = 4 * p.vertices;
    // Orient strands: leaving through dart d means entering at alpha[d] and
    // leaving again through the opposite dart.
    std::vector<int> out(n, -1);  // 1 if the strand leaves through the dart
    std::vector<int> edge(n, -1);
    int edges = 0;
    for (int s = 0; s < n; ++s) {
        if (out[s] >= 0) continue;
        for (int d = s; out[d] < 0;) {
            out[d] = 1;
            int e = p.alpha[d];
            out[e] = 0;
            edge[d] = edge[e] = ++edges;
            d = (e & ~3) | ((e + 2) & 3);
        }
    }
    std::vector<std::array<int, 4>> slots(p.vertices);
    std::vector<int> over_in(p.vertices);
    for (int v = 0; v < p.vertices; ++v) {
        int under = (over_mask >> v) & 1 ? 0 : 1;  // incoming under dart
        if (out[4 * v + under]) under += 2;
        for (int s = 0; s < 4; ++s) slots[v][s] = edge[4 * v + (under + s) % 4];
        over_in[v] = out[4 * v + (under + 1) % 4] ? 3 : 1;
    }
    return Diagram::from_oriented(slots, over_in, 0, true);
}

std::vector<Diagram> connected_diagrams(int c) {
    std::vector<Diagram> out;
    for (const auto& p : projections(c)) {
        std::set<std::vector<int>> seen;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << c); ++m)
            if (seen.insert(canonical_key(p, m)).second) out.push_back(realize(p, m));
    }
    return out;
}

std::vector<Diagram> random_braid_closures(int count, int max_c, std::uint64_t seed) {
    if (max_c < 1) throw InvalidN("braid words need at least one letter");
    std::mt19937_64 rng(seed);
    std::vector<Diagram> out;
    while (static_cast<int>(out.size()) < count) {
        int c = std::uniform_int_distribution<int>(1, max_c)(rng);
        int strands = std::uniform_int_distribution<int>(2, std::min(c + 1, 5))(rng);
        std::vector<int> gens(c);
        for (int& g : gens) g = std::uniform_int_distribution<int>(1, strands - 1)(rng);
        std::set<int> used(gens.begin(), gens.end());
        if (static_cast<int>(used.size()) != strands - 1) continue;
        // Strands run upward; around a crossing the ends read bottom-left,
        // bottom-right, top-right, top-left counterclockwise.
        std::vector<int> top(strands);
        int label = 0;
        for (int& t : top) t = ++label;
        std::vector<int> bottom = top;
        std::vector<std::array<int, 4>> slots;
        std::vector<int> over_in;
        for (int g : gens) {
            int i = g - 1;
            int bl = top[i], br = top[i + 1], tl = ++label, tr = ++label;
            if (std::bernoulli_distribution(0.5)(rng)) {
                slots.push_back({bl, br, tr, tl});
                over_in.push_back(1);
            } else {
                slots.push_back({br, tr, tl, bl});
                over_in.push_back(3);
            }
            top[i] = tl;
            top[i + 1] = tr;
        }
        std::map<int, int> close;
        for (int s = 0; s < strands; ++s) close[top[s]] = bottom[s];
        std::map<int, int> compact;
        for (auto& x : slots)
            for (int& a : x) {
                if (close.count(a)) a = close[a];
                a = compact.try_emplace(a, static_cast<int>(compact.size()) + 1).first->second;
            }
        out.push_back(Diagram::from_oriented(slots, over_in, 0, true));
    }
    return out;
}

Diagram seeded_nonadequate() { return parse_pd("PD[X[4,1,5,2],X[3,1,4,6],X[5,3,6,2]]"); }

std::vector<TableEntry> search_small_nonadequate(int max_c) {
    if (max_c > 6) throw TooLarge("the exhaustive search stops at 6 crossings");
    std::vector<TableEntry> out;
    std::set<std::vector<int>> keys;
    for (int c = 1; c <= max_c; ++c) {
        int index = 0;
        for (const auto& d : connected_diagrams(c)) {
            ++index;
            if (!is_reduced(d) || is_A_adequate(d).adequate) continue;
            keys.insert(canonical_key(projection_of(d), ~std::uint64_t{0}));
            out.push_back({"gen" + std::to_string(c) + "-" + std::to_string(index), d, "generated", ""});
        }
    }
    Diagram seed = seeded_nonadequate();
    if (seed.crossing_count() <= max_c && !keys.count(canonical_key(projection_of(seed), ~std::uint64_t{0})))
        out.push_back({"seeded", seed, "seeded", "trefoil with one crossing switched"});
    return out;
}

}  // namespace joneslab
