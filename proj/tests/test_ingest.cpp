#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include "joneslab/errors.hpp"
#include "joneslab/ingest.hpp"
#include "joneslab/states.hpp"
#include "support.hpp"

using namespace joneslab;
namespace fs = std::filesystem;

namespace {

// Rooted 4-regular planar maps with c vertices: 2 * 3^c * (2c)! / (c! (c+2)!).
long rooted_count(int c) {
    mpz_class a, b, num;
    mpz_fac_ui(num.get_mpz_t(), 2 * c);
    mpz_fac_ui(a.get_mpz_t(), c);
    mpz_fac_ui(b.get_mpz_t(), c + 2);
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 3, c);
    mpz_class r = 2 * p * num / (a * b);
    return r.get_si();
}

// Counts rooted maps by brute force over all dart pairings with fixed
// counterclockwise rotations: keeps the connected pairings of genus 0 and
// divides out the 4^c c! relabelings, weighted by the 4c choices of root.
long brute_rooted_count(int c) {
    int darts = 4 * c;
    std::vector<int> alpha(darts, -1);
    long labeled = 0;
    auto genus_zero_connected = [&] {
        std::vector<bool> seen(darts);
        int faces = 0;
        for (int d = 0; d < darts; ++d) {
            if (seen[d]) continue;
            ++faces;
            for (int x = d; !seen[x];) {
                seen[x] = true;
                int y = alpha[x];
                x = (y / 4) * 4 + (y % 4 + 1) % 4;
            }
        }
        std::vector<int> comp(c, -1);
        std::vector<int> stack{0};
        comp[0] = 0;
        int reached = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int k = 0; k < 4; ++k) {
                int w = alpha[4 * v + k] / 4;
                if (comp[w] < 0) comp[w] = 0, ++reached, stack.push_back(w);
            }
        }
        return reached == c && c - 2 * c + faces == 2;
    };
    auto rec = [&](auto&& self) -> void {
        int first = -1;
        for (int d = 0; d < darts; ++d)
            if (alpha[d] < 0) {
                first = d;
                break;
            }
        if (first < 0) {
            labeled += genus_zero_connected();
            return;
        }
        for (int d = first + 1; d < darts; ++d) {
            if (alpha[d] >= 0) continue;
            alpha[first] = d, alpha[d] = first;
            self(self);
            alpha[first] = alpha[d] = -1;
        }
    };
    rec(rec);
    long relabel = 1;
    for (int i = 1; i <= c; ++i) relabel *= 4 * i;
    return labeled * darts / relabel;
}

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name) : path(fs::temp_directory_path() / name) { fs::remove(path); }
    ~TempFile() { fs::remove(path); }
};

StoreRecord record(const std::string& name, int color, long coeff) {
    StoreRecord r;
    r.name = name;
    r.color = color;
    r.engine = "fast";
    r.polynomial = nlohmann::json::array({nlohmann::json::array({1, coeff})});
    r.degree = {{"d", 1}};
    return r;
}

}  // namespace

TEST_CASE("shipped fixtures load cleanly") {
    LoadedTable t = load_table(std::string(JONESLAB_DATA_DIR) + "/fixtures.csv");
    CHECK(t.errors.empty());
    CHECK(t.entries.size() == 12);
    std::set<std::string> names;
    for (auto& e : t.entries) {
        CHECK(names.insert(e.name).second);
        CHECK(e.provenance.find("fixtures.csv") != std::string::npos);
    }
    CHECK(find_entry(t.entries, "trefoil").pd.crossing_count() == 3);
    CHECK_THROWS_AS(find_entry(t.entries, "nope"), ValidationError);
    CHECK_THROWS_AS(load_table("/nonexistent/table.csv"), ValidationError);
}

TEST_CASE("bad rows are reported without stopping the load") {
    std::istringstream in(
        "name,pd_code,notes\n"
        "\n"
        "# comment\n"
        "trefoil,\"PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]\",\"right-handed, A-adequate\"\n"
        "broken,PD[X[1,2,3]]\n"
        "nonplanar,\"PD[X[1,1,2,3]]\"\n"
        "lonely\n"
        ",U1 PD[]\n"
        "unknot,U1 PD[],\n"
        "\"open quote,PD[]\n"
        "hopf,\"PD[X[4,1,3,2],X[2,3,1,4]]\",link,extra\n");
    LoadedTable t = read_table(in, "memory");
    REQUIRE(t.entries.size() == 2);
    CHECK(t.entries[0].name == "trefoil");
    CHECK(t.entries[0].notes == "right-handed, A-adequate");
    CHECK(t.entries[0].provenance == "memory");
    CHECK(t.entries[1].name == "unknot");
    std::vector<int> lines;
    for (auto& e : t.errors) lines.push_back(e.line);
    CHECK(lines == std::vector<int>{5, 6, 7, 8, 10, 11});
}

TEST_CASE("repeated names are rejected") {
    std::istringstream in("a,U1 PD[]\nb,U2 PD[]\na,U1 PD[]\n");
    CHECK_THROWS_AS(read_table(in, "memory"), DuplicateName);
}

TEST_CASE("result store") {
    TempFile f("joneslab-test-store.ndjson");
    ResultStore store(f.path.string());
    CHECK(store.records().empty());
    CHECK(store.put(record("trefoil", 2, 1)));
    CHECK(store.put(record("trefoil", 3, 1)));
    CHECK(!store.put(record("trefoil", 2, 1)));
    CHECK_THROWS_AS(store.put(record("trefoil", 2, -1)), StoreMismatch);
    auto rs = store.records();
    REQUIRE(rs.size() == 2);
    CHECK(rs[0].version == library_version);
    CHECK(!rs[0].timestamp.empty());
    CHECK(StoreRecord::from_json(rs[0].to_json()).to_json() == rs[0].to_json());
    auto found = store.find("trefoil", 3, "fast");
    REQUIRE(found);
    CHECK(found->polynomial == record("trefoil", 3, 1).polynomial);
    CHECK(!store.find("trefoil", 3, "skein"));

    ResultStore reopened(f.path.string());
    CHECK(reopened.records().size() == 2);
}

TEST_CASE("store location from the environment") {
    const char* old = std::getenv("JONESLAB_STORE");
    std::string saved = old ? old : "";
    setenv("JONESLAB_STORE", "/tmp/elsewhere.ndjson", 1);
    CHECK(ResultStore::default_path() == "/tmp/elsewhere.ndjson");
    unsetenv("JONESLAB_STORE");
    CHECK(ResultStore::default_path() == "joneslab-store.ndjson");
    if (old) setenv("JONESLAB_STORE", saved.c_str(), 1);
}

TEST_CASE("rooted projection counts") {
    for (int c = 1; c <= 3; ++c) CHECK(brute_rooted_count(c) == rooted_count(c));
    for (int c = 1; c <= 5; ++c) {
        CAPTURE(c);
        CHECK(static_cast<long>(rooted_projections(c).size()) == rooted_count(c));
        CHECK(projections(c).size() <= rooted_projections(c).size());
    }
    CHECK_THROWS_AS(rooted_projections(0), InvalidN);
}

TEST_CASE("generated diagrams") {
    for (int c = 1; c <= 4; ++c) {
        auto a = connected_diagrams(c), b = connected_diagrams(c);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(render_pd(a[i]) == render_pd(b[i]));
            CHECK(a[i].crossing_count() == c);
            CHECK(face_count(a[i]) == c + 2);
        }
        std::size_t per_projection_max = std::size_t{1} << c;
        CHECK(a.size() <= projections(c).size() * per_projection_max);
        CHECK(a.size() >= projections(c).size());
    }
}

TEST_CASE("search for reduced diagrams that are not A-adequate") {
    auto a = search_small_nonadequate(4), b = search_small_nonadequate(4);
    REQUIRE(!a.empty());
    REQUIRE(a.size() == b.size());
    std::set<std::string> names;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK(render_pd(a[i].pd) == render_pd(b[i].pd));
        CHECK(is_reduced(a[i].pd));
        CHECK(!is_A_adequate(a[i].pd).adequate);
        CHECK(a[i].pd.crossing_count() <= 4);
        CHECK(names.insert(a[i].name).second);
    }
    bool three = false;
    for (auto& e : a) three = three || e.pd.crossing_count() == 3;
    CHECK(three);
    CHECK_THROWS_AS(search_small_nonadequate(7), TooLarge);
    CHECK(is_reduced(seeded_nonadequate()));
    CHECK(!is_A_adequate(seeded_nonadequate()).adequate);
}

TEST_CASE("random braid closures") {
    auto a = random_braid_closures(30, 12, 99), b = random_braid_closures(30, 12, 99);
    REQUIRE(a.size() == 30);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(render_pd(a[i]) == render_pd(b[i]));
        CHECK(a[i].crossing_count() >= 1);
        CHECK(a[i].crossing_count() <= 12);
        CHECK(face_count(a[i]) == a[i].crossing_count() + 2);
    }
    auto c = random_braid_closures(30, 12, 100);
    bool differ = false;
    for (std::size_t i = 0; i < a.size(); ++i) differ = differ || render_pd(a[i]) != render_pd(c[i]);
    CHECK(differ);
    CHECK_THROWS_AS(random_braid_closures(1, 0, 1), InvalidN);
}
