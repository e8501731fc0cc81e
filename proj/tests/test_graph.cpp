#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracles.hpp"
#include "uh/graph.hpp"

#include <algorithm>
#include <set>

using namespace uh;

namespace {

std::set<std::pair<int, int>> as_set(const std::vector<std::pair<int, int>>& v) {
    return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("load_graph infers node count and parses edges") {
    const WeightedGraph g = load_graph(std::string("0 1 4\n1 2 2\n"));
    CHECK(g.n == 3);
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0].capacity == 4);
    CHECK(g.edges[1].capacity == 2);
}

TEST_CASE("load_graph accepts headers, comments and tabs") {
    const WeightedGraph g = load_graph(std::string(
        "# comment line\nn=5\n0\t1\t1.5  # trailing comment\n\n3 4 2\n"));
    CHECK(g.n == 5);
    CHECK(g.edges.size() == 2);
    CHECK(g.edges[0].capacity == doctest::Approx(1.5));
}

TEST_CASE("load_graph error paths") {
    CHECK_THROWS_AS(load_graph(std::string("0 0 1\n")), GraphParseError);
    CHECK_THROWS_AS(load_graph(std::string("0 1 0\n")), GraphParseError);
    CHECK_THROWS_AS(load_graph(std::string("0 1 -2\n")), GraphParseError);
    CHECK_THROWS_AS(load_graph(std::string("0 1 1\n0 1 2\n")), GraphParseError);
    CHECK_THROWS_AS(load_graph(std::string("0 x 1\n")), GraphParseError);
    CHECK_THROWS_AS(load_graph(std::string("n=2\n0 5 1\n")), GraphParseError);
    try {
        load_graph(std::string("0 1 1\nbroken\n"));
        FAIL("expected GraphParseError");
    } catch (const GraphParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("directed orientations are summed into S = C + C^T") {
    const WeightedGraph g = load_graph(std::string("0 1 4\n1 0 3\n1 2 2\n"));
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0].capacity == doctest::Approx(7.0));
    CHECK(g.edges[1].capacity == doctest::Approx(2.0));
}

TEST_CASE("zachary fixture loads with the documented structure") {
    const WeightedGraph g = load_graph_file(std::string(UH_DATA_DIR) + "/zachary_karate.tsv");
    CHECK(g.n == 34);
    CHECK(g.edges.size() == 78);
    CHECK(g.unweighted() == false);
    for (const Edge& e : g.edges) {
        CHECK(e.capacity >= 2.0);  // symmetrized strengths are sums of two entries >= 1
        CHECK(e.capacity <= 14.0);
    }
    // the two leaders have the largest strength scores
    const std::vector<int> top = g.top_strength_nodes(2);
    CHECK(((top[0] == 33 && top[1] == 0) || (top[0] == 0 && top[1] == 33)));
}

TEST_CASE("weaker set of an unweighted graph is the non-edge set") {
    const WeightedGraph g = load_graph(std::string("0 1 1\n1 2 1\n2 3 1\n"));
    const auto w = weaker_set(g, 0);
    CHECK(as_set(w) == std::set<std::pair<int, int>>{{0, 2}, {0, 3}, {1, 3}});
}

TEST_CASE("weaker set of the minimum-capacity edge holds only non-edges") {
    const WeightedGraph g = load_graph(std::string("0 1 3\n1 2 2\n2 3 1\n"));
    const int k_min = g.edge_index(2, 3);
    const auto w = weaker_set(g, k_min);
    CHECK(as_set(w) == std::set<std::pair<int, int>>{{0, 2}, {0, 3}, {1, 3}});
}

TEST_CASE("weaker set of a capacity-3,2,1 path") {
    const WeightedGraph g = load_graph(std::string("0 1 3\n1 2 2\n2 3 1\n"));
    const auto w = weaker_set(g, g.edge_index(0, 1));
    CHECK(as_set(w) == std::set<std::pair<int, int>>{
                           {1, 2}, {2, 3}, {0, 2}, {0, 3}, {1, 3}});
}

TEST_CASE("exact weaker sets equal brute-force enumeration on small graphs") {
    oracles::Sampler s(211);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 4 + static_cast<int>(s.rng.below(5));  // 4..8 nodes
        std::string text = "n=" + std::to_string(n) + "\n";
        std::vector<std::tuple<int, int, double>> chosen;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (s.rng.unit() < 0.5) {
                    const double c = 1.0 + static_cast<double>(s.rng.below(4));
                    chosen.emplace_back(i, j, c);
                    text += std::to_string(i) + " " + std::to_string(j) + " " +
                            std::to_string(c) + "\n";
                }
        if (chosen.empty()) continue;
        const WeightedGraph g = load_graph(text);

        for (std::size_t k = 0; k < g.edges.size(); ++k) {
            std::set<std::pair<int, int>> expected;
            for (const Edge& e : g.edges)
                if (e.capacity < g.edges[k].capacity) expected.insert({e.i, e.j});
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (g.edge_index(i, j) < 0) expected.insert({i, j});
            CHECK(as_set(weaker_set(g, static_cast<int>(k))) == expected);
        }
    }
}

TEST_CASE("sampled weaker sets are deterministic, valid and capped") {
    const WeightedGraph g = oracles::synthetic_hierarchy(40, 5);
    WeakerSetConfig cfg;
    cfg.sample_non_edges = true;
    cfg.sample_count = 25;
    cfg.seed = 77;
    const auto w1 = weaker_set(g, 3, cfg);
    const auto w2 = weaker_set(g, 3, cfg);
    CHECK(w1 == w2);

    long long lower = 0;
    for (const Edge& e : g.edges)
        if (e.capacity < g.edges[3].capacity) ++lower;
    CHECK(static_cast<long long>(w1.size()) == lower + 25);

    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : w1) {
        CHECK(a < b);
        CHECK(seen.insert({a, b}).second);  // no duplicates
        // members are either lower-capacity edges or non-edges; never e_k
        const int idx = g.edge_index(a, b);
        if (idx >= 0) CHECK(g.edges[idx].capacity < g.edges[3].capacity);
        CHECK(std::make_pair(g.edges[3].i, g.edges[3].j) != std::make_pair(a, b));
    }
}

TEST_CASE("weaker_set rejects bad edge indices") {
    const WeightedGraph g = load_graph(std::string("0 1 1\n"));
    CHECK_THROWS_AS(weaker_set(g, 5), std::out_of_range);
}

TEST_CASE("strength scores accumulate capacities") {
    const WeightedGraph g = load_graph(std::string("0 1 4\n1 2 2\n"));
    const std::vector<double> s = g.strength_scores();
    CHECK(s[0] == doctest::Approx(4));
    CHECK(s[1] == doctest::Approx(6));
    CHECK(s[2] == doctest::Approx(2));
}
