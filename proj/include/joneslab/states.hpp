#pragma once

#include <array>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <vector>

#include "joneslab/diagram.hpp"

namespace joneslab {

// Bit set at crossing i means the B-resolution there.
class KauffmanState {
public:
    KauffmanState() = default;
    explicit KauffmanState(int crossings, bool all_b = false) : bits_(crossings, all_b) {}
    static KauffmanState all_A(int c) { return KauffmanState(c, false); }
    static KauffmanState all_B(int c) { return KauffmanState(c, true); }
    static KauffmanState from_mask(int c, std::uint64_t mask);
    static KauffmanState from_bits(std::vector<bool> bits);

    int size() const { return static_cast<int>(bits_.size()); }
    bool is_B(int i) const { return bits_[i]; }
    void set_B(int i, bool b) { bits_[i] = b; }
    int b_count() const;
    const std::vector<bool>& bits() const { return bits_; }

    bool operator==(const KauffmanState&) const = default;

private:
    std::vector<bool> bits_;
};

KauffmanState dual(const KauffmanState& s);

// The two arcs resolving a crossing each join slot s to slot s+1 (mod 4);
// a corner is named by that s: A uses corners 0 and 2, B uses 1 and 3.
struct Attachment {
    int crossing;
    int corner;
    bool left;  // the crossing's edge lies to the left of the circle's traversal
};

struct EdgeEnd {
    int circle;
    int position;
};

struct StateGraph {
    std::vector<std::vector<Attachment>> circles;  // cyclic attachment orders
    std::vector<std::array<EdgeEnd, 2>> edges;     // per crossing, ends in corner order

    int circle_count() const { return static_cast<int>(circles.size()); }
    bool is_loop(int crossing) const { return edges[crossing][0].circle == edges[crossing][1].circle; }
    // Circle containing the given corner arc of a crossing.
    int circle_of(int crossing, int corner) const;
    nlohmann::json to_json() const;
};

StateGraph resolve(const Diagram& d, const KauffmanState& s);
int count_circles(const Diagram& d, const KauffmanState& s);

// Circle counting for many states of one diagram (union-find over arcs).
class CircleCounter {
public:
    explicit CircleCounter(const Diagram& d);
    int count(std::uint64_t b_mask) const;  // requires c <= 64
    int count(const std::vector<bool>& b_bits) const;
    // Fills root[arc] with a circle representative; the corner arc (x, s)
    // lies on the circle of arc slots(x)[s].
    int label(const std::vector<bool>& b_bits, std::vector<int>& root) const;
    const std::array<int, 4>& slots(int x) const { return slots_[x]; }

private:
    int crossings_;
    int arcs_;
    int unknots_;
    std::vector<std::array<int, 4>> slots_;
};

struct Adequacy {
    bool adequate = true;
    std::optional<int> witness;  // lowest-index loop crossing
    std::vector<int> loops;      // all loop crossings of the all-A state graph
};

Adequacy is_A_adequate(const Diagram& d);
bool is_B_adequate(const Diagram& d);

}  // namespace joneslab
