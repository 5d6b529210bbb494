#pragma once

#include <array>
#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

namespace joneslab {

// Slots are counterclockwise starting at the incoming under-strand:
// 0 = under in, 1, 2 = under out, 3. The over strand runs between 1 and 3.
struct Crossing {
    std::array<int, 4> arcs{};
    int sign = 0;     // +1 iff the over strand runs from slot 3 to slot 1
    int over_in = 0;  // slot where the over strand enters (1 or 3)
    bool operator==(const Crossing&) const = default;
};

struct ArcEnd {
    int crossing = -1;
    int slot = -1;
    bool operator==(const ArcEnd&) const = default;
};

// One pass of a component through a crossing.
struct Visit {
    int crossing;
    bool over;
};

class Diagram {
public:
    Diagram() = default;

    // Validates the code and derives the orientation from the arc numbering.
    static Diagram from_pd(const std::vector<std::array<int, 4>>& slots, int unknots = 0);
    // Orientation given by the over-strand entry slot of each crossing.
    static Diagram from_oriented(const std::vector<std::array<int, 4>>& slots,
                                 const std::vector<int>& over_in, int unknots, bool relabel);

    int crossing_count() const { return static_cast<int>(crossings_.size()); }
    int arc_count() const { return arc_count_; }
    int unknots() const { return unknots_; }
    bool empty() const { return crossings_.empty() && unknots_ == 0; }
    const std::vector<Crossing>& crossings() const { return crossings_; }
    const Crossing& crossing(int i) const { return crossings_[i]; }

    ArcEnd arc_tail(int arc) const { return tail_[arc]; }
    ArcEnd arc_head(int arc) const { return head_[arc]; }
    // The other end of the arc attached at (crossing, slot).
    ArcEnd across(int crossing, int slot) const;

    // Components that pass through crossings, each as its cyclic visit sequence.
    std::vector<std::vector<Visit>> gauss_words() const;
    int component_count() const;  // including crossingless unknots

    bool operator==(const Diagram&) const = default;

private:
    void index_arcs();
    void check_orientation() const;
    void check_planar() const;

    std::vector<Crossing> crossings_;
    int arc_count_ = 0;
    int unknots_ = 0;
    std::vector<ArcEnd> tail_, head_;  // indexed by arc label, entry 0 unused
};

Diagram parse_pd(std::string_view text);
std::string render_pd(const Diagram& d);
nlohmann::json diagram_to_json(const Diagram& d);
Diagram diagram_from_json(const nlohmann::json& j);

int writhe(const Diagram& d);
Diagram mirror(const Diagram& d);
// Arcs renumbered consecutively along components.
Diagram relabeled(const Diagram& d);

bool is_nugatory(const Diagram& d, int crossing);
bool is_reduced(const Diagram& d);

// Faces of the projection, counted from the rotation system.
int face_count(const Diagram& d);

// Cabled crossing (under_copy, over_copy) sits at grid position (x, y) of the
// original crossing's n x n grid: x grows toward slot 1, y toward slot 2.
// Copies are numbered 1..n left to right along the orientation.
struct CableCell {
    int crossing;
    int under_copy;
    int over_copy;
    int x;
    int y;
};

struct Cable {
    Diagram diagram;
    int n = 1;
    std::vector<CableCell> cells;  // indexed by cabled crossing
    int index_of(int crossing, int x, int y) const;
};

Cable cable(const Diagram& d, int n);

// Component of every arc, indexed by arc label (entry 0 unused). Components
// through crossings are numbered by their smallest arc; crossingless unknots
// come after them.
std::vector<int> arc_components(const Diagram& d);

// Cable with copies[i] parallel strands of component i. Components with no
// copies are deleted together with their crossings.
Diagram cable(const Diagram& d, const std::vector<int>& copies);

}  // namespace joneslab
