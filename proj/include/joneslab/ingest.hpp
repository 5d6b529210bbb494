#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "joneslab/diagram.hpp"

namespace joneslab {

inline constexpr std::string_view library_version = "0.1.0";

struct TableEntry {
    std::string name;
    Diagram pd;
    std::string provenance;  // file the row came from, or "generated"
    std::string notes;
};

struct RowError {
    int line = 0;
    std::string message;
};

struct LoadedTable {
    std::vector<TableEntry> entries;
    std::vector<RowError> errors;
};

// CSV with columns name,pd_code,notes and an optional header row. Bad rows
// are collected in errors; a repeated name throws DuplicateName.
LoadedTable load_table(const std::string& path);
LoadedTable read_table(std::istream& in, const std::string& provenance);
const TableEntry& find_entry(const std::vector<TableEntry>& entries, const std::string& name);

// Append-only NDJSON store of computed polynomials. A record is keyed by
// (name, color, engine); writing an existing key again must reproduce the
// stored polynomial and degree data exactly.
struct StoreRecord {
    std::string name;
    int color = 0;
    std::string engine;
    nlohmann::json polynomial;
    nlohmann::json degree;
    std::string timestamp;
    std::string version;

    nlohmann::json to_json() const;
    static StoreRecord from_json(const nlohmann::json& j);
};

class ResultStore {
public:
    explicit ResultStore(std::string path);
    // $JONESLAB_STORE, else joneslab-store.ndjson in the working directory.
    static std::string default_path();

    const std::string& path() const { return path_; }
    std::vector<StoreRecord> records() const;
    std::optional<StoreRecord> find(const std::string& name, int color, const std::string& engine) const;
    // Appends a new record and returns true, or checks an existing one and
    // returns false. Throws StoreMismatch when the values differ.
    bool put(StoreRecord r);

private:
    std::string path_;
    mutable std::mutex mu_;
};

// A connected 4-regular planar map on c vertices. Vertex v owns darts
// 4v .. 4v+3 in counterclockwise order and alpha pairs the darts into edges.
struct Projection {
    int vertices = 0;
    std::vector<int> alpha;
};

// Rooted maps built from dart 0 in canonical order, one per rooted map.
std::vector<Projection> rooted_projections(int c);
// One representative per map up to choice of root.
std::vector<Projection> projections(int c);

// Diagram on a projection; bit v of over_mask puts the strand through darts
// 4v+1, 4v+3 over, otherwise the strand through 4v, 4v+2 is over.
Diagram realize(const Projection& p, std::uint64_t over_mask);

// All diagrams with exactly c crossings on connected projections, up to
// rerooting, in a fixed order.
std::vector<Diagram> connected_diagrams(int c);

// Closures of random braid words with every generator present, so the
// projections are connected.
std::vector<Diagram> random_braid_closures(int count, int max_c, std::uint64_t seed);

// A reduced diagram that is not A-adequate: the trefoil with one crossing
// switched.
Diagram seeded_nonadequate();

// Reduced, not A-adequate diagrams with at most max_c <= 6 crossings, one per
// projection and crossing choice, plus the seeded diagram if it is missing.
std::vector<TableEntry> search_small_nonadequate(int max_c);

}  // namespace joneslab
