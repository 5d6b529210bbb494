#include <doctest.h>

#include <set>

#include "joneslab/diagram.hpp"
#include "joneslab/errors.hpp"
#include "joneslab/states.hpp"
#include "support.hpp"

using namespace joneslab;

namespace {

// Crossing signs read straight from a consecutively numbered PD code: the
// under strand runs slot 0 -> 2, the over strand runs 3 -> 1 when the arc at
// slot 1 follows the arc at slot 3.
int traced_writhe(const std::vector<std::array<int, 4>>& code) {
    int arcs = 0;
    for (auto& x : code)
        for (int a : x) arcs = std::max(arcs, a);
    int w = 0;
    for (auto& x : code) {
        w += x[1] == x[3] % arcs + 1 ? 1 : -1;
    }
    return w;
}

}  // namespace

TEST_CASE("parsing accepts the documented grammar") {
    Diagram u = parse_pd("U1 PD[]");
    CHECK(u.crossing_count() == 0);
    CHECK(u.unknots() == 1);
    CHECK(u.component_count() == 1);
    Diagram t = parse_pd(" PD[ X[1,4,2,5], X[3,6,4,1],\n X[5,2,6,3] ] ");
    CHECK(t.crossing_count() == 3);
    CHECK(std::abs(writhe(t)) == 3);
    CHECK(parse_pd("U2 PD[]").component_count() == 2);
}

TEST_CASE("malformed codes are rejected") {
    CHECK_THROWS_AS(parse_pd("PD[X[1,2,3]]"), SyntaxError);
    CHECK_THROWS_AS(parse_pd("PD[X[1,2,3,4]"), SyntaxError);
    CHECK_THROWS_AS(parse_pd("knot"), SyntaxError);
    CHECK_THROWS_AS(parse_pd("PD[X[1,2,3,4]] extra"), SyntaxError);
    CHECK_THROWS_AS(parse_pd("PD[X[1,2,3,4]]"), ValidationError);
    CHECK_THROWS_AS(parse_pd("PD[X[1,1,1,1]]"), ValidationError);
    CHECK_THROWS_AS(parse_pd("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,7]]"), ValidationError);
    CHECK_THROWS_AS(parse_pd("PD[X[0,5,2,4],X[3,1,4,6],X[5,3,6,2]]"), ValidationError);
}

TEST_CASE("writhe matches signs traced from the arc numbering") {
    CHECK(writhe(testing::fixture("unknot")) == 0);
    CHECK(writhe(testing::fixture("trefoil")) == 3);
    CHECK(writhe(testing::fixture("trefoil-left")) == -3);
    CHECK(writhe(testing::fixture("figure8")) == 0);
    CHECK(writhe(testing::fixture("cinquefoil")) == 5);
    for (auto& e : testing::fixtures()) {
        if (e.pd.component_count() != 1 || e.pd.crossing_count() < 2) continue;
        std::vector<std::array<int, 4>> code;
        for (auto& x : e.pd.crossings()) code.push_back(x.arcs);
        CAPTURE(e.name);
        CHECK(writhe(e.pd) == traced_writhe(code));
    }
}

TEST_CASE("render and parse are inverse on the corpus") {
    for (auto& e : testing::fixtures()) {
        CAPTURE(e.name);
        CHECK(parse_pd(render_pd(e.pd)) == e.pd);
        CHECK(diagram_from_json(diagram_to_json(e.pd)) == e.pd);
    }
}

TEST_CASE("mirror is an involution that negates the writhe") {
    for (auto& e : testing::fixtures()) {
        CAPTURE(e.name);
        CHECK(mirror(mirror(e.pd)) == e.pd);
        CHECK(writhe(mirror(e.pd)) == -writhe(e.pd));
    }
    CHECK(mirror(testing::fixture("unknot")) == testing::fixture("unknot"));
    Diagram t = testing::fixture("trefoil");
    CHECK(is_A_adequate(t).adequate);
    CHECK(is_B_adequate(mirror(t)));
}

TEST_CASE("gauss words pass every crossing once over and once under") {
    for (auto& e : testing::fixtures()) {
        std::vector<int> over(e.pd.crossing_count()), under(e.pd.crossing_count());
        for (auto& w : e.pd.gauss_words())
            for (auto& v : w) (v.over ? over : under)[v.crossing]++;
        for (int x = 0; x < e.pd.crossing_count(); ++x) {
            CHECK(over[x] == 1);
            CHECK(under[x] == 1);
        }
    }
    CHECK(testing::fixture("hopf").component_count() == 2);
}

TEST_CASE("nugatory crossings") {
    CHECK(is_reduced(testing::fixture("unknot")));
    CHECK(is_reduced(testing::fixture("trefoil")));
    CHECK(is_reduced(testing::fixture("figure8")));
    CHECK(is_reduced(testing::fixture("hopf")));
    CHECK(!is_reduced(testing::fixture("kinked-trefoil")));
    CHECK(is_nugatory(testing::fixture("kinked-trefoil"), 3));
    CHECK(!is_reduced(testing::fixture("unknot-kink")));
    CHECK(is_reduced(testing::fixture("switched-trefoil")));
}

TEST_CASE("projections of connected diagrams have c + 2 faces") {
    for (auto& e : testing::fixtures()) {
        if (e.pd.crossing_count() == 0) continue;
        CAPTURE(e.name);
        CHECK(face_count(e.pd) == e.pd.crossing_count() + 2);
    }
}

TEST_CASE("cables scale crossings, writhe, components and all-A circles") {
    for (auto& e : testing::fixtures()) {
        const Diagram& d = e.pd;
        int c = d.crossing_count(), w = writhe(d);
        int s = count_circles(d, KauffmanState::all_A(c));
        for (int n = 1; n <= 4; ++n) {
            Cable cb = cable(d, n);
            CAPTURE(e.name);
            CAPTURE(n);
            CHECK(cb.diagram.crossing_count() == n * n * c);
            CHECK(writhe(cb.diagram) == n * n * w);
            CHECK(cb.diagram.component_count() == n * d.component_count());
            CHECK(count_circles(cb.diagram, KauffmanState::all_A(n * n * c)) == n * s);
            for (int x = 0; x < cb.diagram.crossing_count(); ++x)
                CHECK(cb.diagram.crossing(x).sign == d.crossing(cb.cells[x].crossing).sign);
        }
    }
}

TEST_CASE("cable grid map") {
    Diagram t = testing::fixture("trefoil");
    Cable one = cable(t, 1);
    CHECK(one.diagram.crossing_count() == 3);
    for (int x = 0; x < 3; ++x) {
        CHECK(one.cells[x].crossing == x);
        CHECK(one.index_of(x, 1, 1) == x);
        CHECK(one.diagram.crossing(x).sign == t.crossing(x).sign);
    }
    CHECK(cable(one.diagram, 3).diagram == cable(t, 3).diagram);
    Cable two = cable(t, 2);
    CHECK(two.diagram.crossing_count() == 12);
    CHECK(writhe(two.diagram) == 12);
    for (int x = 0; x < 3; ++x)
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j) {
                int k = two.index_of(x, i, j);
                CHECK(two.cells[k].crossing == x);
                CHECK(two.cells[k].x == i);
                CHECK(two.cells[k].y == j);
            }
    CHECK_THROWS_AS(cable(t, 0), InvalidN);
}

TEST_CASE("cables with a copy count per component") {
    for (auto& e : testing::fixtures()) {
        int r = e.pd.component_count();
        for (int n = 1; n <= 3; ++n) {
            CAPTURE(e.name);
            CHECK(render_pd(cable(e.pd, std::vector<int>(r, n))) == render_pd(cable(e.pd, n).diagram));
        }
    }
    const Diagram& hopf = testing::fixture("hopf");
    CHECK(render_pd(cable(hopf, std::vector<int>{1, 0})) == "U1 PD[]");
    CHECK(render_pd(cable(hopf, std::vector<int>{0, 3})) == "U3 PD[]");
    CHECK(cable(hopf, std::vector<int>{0, 0}).empty());
    Diagram d = cable(hopf, std::vector<int>{2, 3});
    CHECK(d.crossing_count() == 12);
    CHECK(d.component_count() == 5);
    CHECK(writhe(d) == 6 * writhe(hopf));
    CHECK_THROWS_AS(cable(hopf, std::vector<int>{1}), InvalidN);
    CHECK_THROWS_AS(cable(hopf, std::vector<int>{1, -1}), InvalidN);
    auto comp = arc_components(hopf);
    CHECK(comp.size() == 5);
    CHECK(std::set<int>(comp.begin() + 1, comp.end()) == std::set<int>{0, 1});
}
