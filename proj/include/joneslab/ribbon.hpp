#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "joneslab/diagram.hpp"
#include "joneslab/poly.hpp"
#include "joneslab/states.hpp"

namespace joneslab {

// Edge subset of the all-A ribbon graph; edge i is crossing i.
class SpanningSubgraph {
public:
    SpanningSubgraph() = default;
    explicit SpanningSubgraph(int edges) : in_(edges, false) {}
    static SpanningSubgraph from_mask(int edges, std::uint64_t mask);
    static SpanningSubgraph from_edges(int edges, const std::vector<int>& list);

    int edge_total() const { return static_cast<int>(in_.size()); }
    bool has(int i) const { return in_[i]; }
    void set(int i, bool b) { in_[i] = b; }
    int size() const;
    std::vector<int> edges() const;
    const std::vector<bool>& bits() const { return in_; }
    KauffmanState state() const { return KauffmanState::from_bits(in_); }  // B exactly on the included edges

    bool operator==(const SpanningSubgraph&) const = default;
    bool operator<(const SpanningSubgraph& o) const { return in_ < o.in_; }

private:
    std::vector<bool> in_;
};

struct SubgraphStats {
    int v = 0, e = 0, f = 0, k = 0, g = 0;
    int rank() const { return v - k; }
    bool operator==(const SubgraphStats&) const = default;
};

// The all-A ribbon graph of a diagram, cached for repeated queries.
class RibbonGraph {
public:
    explicit RibbonGraph(const Diagram& d);

    const Diagram& diagram() const { return d_; }
    int vertex_count() const { return v_; }
    int edge_count() const { return static_cast<int>(ends_.size()); }
    // Circles (vertices) at the two ends of edge i.
    std::pair<int, int> ends(int i) const { return ends_[i]; }
    bool is_loop(int i) const { return ends_[i].first == ends_[i].second; }
    const StateGraph& all_A() const { return graph_; }
    const CircleCounter& counter() const { return counter_; }

    int components(const SpanningSubgraph& h) const;
    int faces(const SpanningSubgraph& h) const;  // via the dual state's circles
    SubgraphStats stats(const SpanningSubgraph& h) const;
    LaurentPoly contribution(const SpanningSubgraph& h) const;
    LaurentPoly contribution(const SubgraphStats& s) const;

private:
    Diagram d_;
    StateGraph graph_;
    CircleCounter counter_;
    int v_;
    std::vector<std::pair<int, int>> ends_;
};

SubgraphStats stats(const Diagram& d, const SpanningSubgraph& h);
LaurentPoly contribution(const Diagram& d, const SpanningSubgraph& h);
// Sum of contributions over all 2^c spanning subgraphs.
LaurentPoly subgraph_bracket(const Diagram& d, int naive_limit = 22, int threads = 1);

// All spanning subgraphs with v - k <= r, in a fixed order.
void for_each_low_rank(const RibbonGraph& g, int r, const std::function<void(const SpanningSubgraph&)>& fn);
std::vector<SpanningSubgraph> enumerate_low_rank(const Diagram& d, int r);

}  // namespace joneslab
