#pragma once

#include <array>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "joneslab/diagram.hpp"
#include "joneslab/poly.hpp"
#include "joneslab/ribbon.hpp"
#include "joneslab/states.hpp"

namespace joneslab {

// Sum over i of C(k, i) A^{c-2i} delta^{d+i}.
LaurentPoly binomial_cancellation(int c, int d, int k);

enum class Side { Center, R, L };

struct EdgeLabel {
    int region = 0;  // Omega index
    Side side = Side::Center;
    int number = 0;  // 1 .. 2n-1
};

std::string label_name(const EdgeLabel& l);  // "3", "R2", "L4"

// Labels on the cable of the chosen loop crossing e of D, read in the all-A
// state graph of D^n. Loops of e^n are numbered 1, 3, ..., 2n-1 and the cell
// (x, y) of the grid lies in region |x - y| with number x + y - 1.
class CableLabeling {
public:
    const Diagram& base() const { return base_; }
    const Cable& cable() const { return cable_; }
    const RibbonGraph& ribbon() const { return *ribbon_; }
    int n() const { return n_; }
    int violating_crossing() const { return e_; }
    // Circle ids of S_0 .. S_{n-1} in the all-A state graph of D^n.
    const std::vector<int>& circles() const { return S_; }

    // Label of a cabled crossing, empty outside e^n.
    const std::optional<EdgeLabel>& label(int x) const { return labels_[x]; }
    // Region index of any edge of the all-A state graph embedded between
    // S_{i-1} and S_i (i >= 1) or touching S_0 inside Omega_0 (i = 0); -1 otherwise.
    int region(int x) const { return region_[x]; }
    // Crossings of e^n in the given region and side, by increasing number.
    // Omega_0 ignores the side.
    const std::vector<int>& edges(int region, Side side) const;
    const std::vector<int>& loops() const { return edges(0, Side::Center); }
    std::optional<int> edge(int region, Side side, int number) const;
    std::string name(int x) const;
    int number(int x) const { return labels_[x]->number; }

    nlohmann::json to_json() const;

    friend CableLabeling label_cable(const Diagram& d, int n);

private:
    Diagram base_;
    Cable cable_;
    std::shared_ptr<RibbonGraph> ribbon_;
    int n_ = 0;
    int e_ = -1;
    std::vector<int> S_;
    std::vector<std::optional<EdgeLabel>> labels_;
    std::vector<int> region_;
    std::vector<std::array<std::vector<int>, 2>> by_region_;  // [region][R, L]
};

// Loop crossing of the all-A state graph whose loop bounds no other loop on
// its side, lowest index first. Throws NotApplicable for A-adequate D.
int choose_violating_crossing(const Diagram& d);

CableLabeling label_cable(const Diagram& d, int n);

// Nonempty terms of the two sequences of one region and side.
struct RegionSequences {
    std::vector<int> t, b;
};

struct SubgraphAnalysis {
    std::vector<int> a;  // loops of e^n, by number
    int m = 0, M = 0;    // smallest and largest number in a, 0 when a is empty
    std::optional<int> s_a;
    int k = -1;            // region index of s_a
    Side side = Side::R;   // side the sequences start from
    bool s_a_free = false;  // s_a is an unincluded edge joining one circle
    // seq[side][region], side 0 = R, 1 = L.
    std::array<std::vector<RegionSequences>, 2> seq;
    std::vector<int> G;     // sorted crossings
    int g_a = 0;
};

std::vector<int> a_of(const CableLabeling& L, const SpanningSubgraph& h);
// Throws WitnessMissing when no starting edge exists.
std::optional<int> s_a_of(const CableLabeling& L, const SpanningSubgraph& h);
SubgraphAnalysis analyze(const CableLabeling& L, const SpanningSubgraph& h);
std::vector<int> G_of(const CableLabeling& L, const SpanningSubgraph& h);
int g_a_of(const CableLabeling& L, const SpanningSubgraph& h);

struct ClassDescriptor {
    std::vector<int> a;
    std::vector<int> G;
    std::vector<int> free_set;
    SpanningSubgraph base;
    SubgraphAnalysis analysis;  // of the base
    SubgraphStats base_stats;
    std::vector<SpanningSubgraph> members;
    std::size_t size() const { return members.size(); }
};

// Classes of all subgraphs with v - k <= n - 2. Throws PartitionError if a
// class is not closed under toggling its free edges.
std::vector<ClassDescriptor> partition_classes(const CableLabeling& L);
std::vector<ClassDescriptor> partition_classes(const Diagram& d, int n);

struct ClassCheck {
    int index = 0;
    std::optional<int> degree;  // max_deg of X_C
    bool degree_ok = true;
    bool faces_ok = true;       // f(H') = f(H_0) + k for all members
    bool rank_genus_ok = true;  // v - k + g constant across the class
    bool lemma_applies = false; // v - k + g <= n - 2
    bool lemma_ok = true;       // |G| + v - k + g >= |a| - 1
};

struct DegreeDropReport {
    int n = 0;
    int c = 0;             // crossings of D^n
    int M = 0;             // M(D^n)
    int bound = 0;         // M(D^n) - 4(n-1)
    std::optional<int> bracket_degree;
    std::size_t subgraphs = 0;
    std::vector<ClassCheck> classes;
    int face_failures = 0, rank_genus_failures = 0, lemma_failures = 0, lemma_checked = 0;
    bool passed() const;
    nlohmann::json to_json() const;
};

// Throws BoundViolation for a class or a bracket above the bound.
DegreeDropReport verify_degree_drop(const Diagram& d, int n, int frontier_cap = 20);

struct GenusIncrementReport {
    std::size_t instances = 0;
    std::size_t holds = 0;
    // Same counts split by the region i of e1 and e2.
    std::vector<std::size_t> instances_by_region, holds_by_region;
    // Instances where H also includes no unlabeled edge embedded in regions
    // i-1 .. i+1 and, for i = 0, no edge of the opposite side of Omega_1
    // numbered from e1 to e3. Across Omega_0 such edges can close a circuit
    // around S_0, and then e2 splits a circle instead of joining two.
    std::size_t guarded_instances = 0;
    std::size_t guarded_holds = 0;
    std::vector<std::string> failures;  // first few, described
};

// Triples (e1, e2, e3) meeting the hypotheses of the genus increment lemma on
// the given subgraphs; checks that v - k + g grows by exactly 1.
GenusIncrementReport check_genus_increments(const CableLabeling& L, const std::vector<SpanningSubgraph>& hs);

// One row of the n = 3 class table.
struct TableRow {
    std::string a, b_R1, t_R0, t_L0, b_L1, G;
    int rank = 0;
    int genus = 0;
    TableRow reflected() const;
    std::string to_string() const;
    auto operator<=>(const TableRow&) const = default;
};

std::vector<TableRow> expected_table_rows();
// Distinct rows realized by the classes whose base has v - k <= 1.
std::vector<TableRow> realized_table_rows(const CableLabeling& L, const std::vector<ClassDescriptor>& classes);

struct TableComparison {
    bool reflected = false;  // realized rows were compared after swapping L and R
    std::vector<TableRow> matched, missing, extra;
    bool exact() const { return missing.empty() && extra.empty(); }
    nlohmann::json to_json() const;
};

TableComparison compare_table(const std::vector<TableRow>& realized);

}  // namespace joneslab
