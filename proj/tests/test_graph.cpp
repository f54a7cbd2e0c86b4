#include <doctest.h>

#include <algorithm>
#include <set>
#include <utility>

#include "emograph/error.hpp"
#include "emograph/graph.hpp"

using namespace emograph;

namespace emograph {
// Ordering for test sets.
inline bool operator<(const NodeId& a, const NodeId& b) {
    if (a.utterance != b.utterance) return a.utterance < b.utterance;
    return static_cast<int>(a.modality) < static_cast<int>(b.modality);
}
}  // namespace emograph

namespace {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

std::set<Edge> edge_set(const ConversationGraph& g) {
    std::set<Edge> edges;
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
        for (const std::uint32_t j : g.adjacency(i)) {
            edges.insert({std::min(i, j), std::max(i, j)});
        }
    }
    return edges;
}

// Independent edge construction straight from the rules: same-modality
// adjacent utterances, plus all modality pairs within one utterance.
std::set<Edge> brute_force_edges(std::size_t n, const ModalitySet& active) {
    const std::size_t m = active.size();
    std::set<Edge> edges;
    for (std::uint32_t a = 0; a < n * m; ++a) {
        for (std::uint32_t b = a + 1; b < n * m; ++b) {
            const std::size_t ua = a / m, ub = b / m;
            const std::size_t ma = a % m, mb = b % m;
            const bool chain = ma == mb && (ua + 1 == ub || ub + 1 == ua);
            const bool clique = ua == ub && ma != mb;
            if (chain || clique) edges.insert({a, b});
        }
    }
    return edges;
}

std::set<NodeId> to_nodes(const ConversationGraph& g, const std::vector<std::uint32_t>& idx) {
    std::set<NodeId> out;
    for (const std::uint32_t i : idx) {
        const NodeId id = g.node_at(i);
        out.insert(id);
    }
    return out;
}

}  // namespace

TEST_CASE("graph: node and edge counts") {
    const ConversationGraph g1 = ConversationGraph::build(1);
    CHECK(g1.node_count() == 3);
    CHECK(g1.edge_count() == 3);  // one clique, no chain

    const ConversationGraph g3 = ConversationGraph::build(3);
    CHECK(g3.node_count() == 9);
    CHECK(g3.edge_count() == 15);

    const ConversationGraph g5 = ConversationGraph::build(5);
    CHECK(g5.node_count() == 15);
    CHECK(g5.edge_count() == 27);

    for (std::size_t n = 1; n <= 10; ++n) {
        const ConversationGraph g = ConversationGraph::build(n);
        CHECK(g.node_count() == 3 * n);
        CHECK(g.edge_count() == 6 * n - 3);
        CHECK(edge_set(g) == brute_force_edges(n, all_modalities()));
    }
}

TEST_CASE("graph: empty conversation raises") {
    CHECK_THROWS_AS(ConversationGraph::build(0), ArgumentError);
}

TEST_CASE("graph: connected neighborhoods") {
    const ConversationGraph g3 = ConversationGraph::build(3);
    // Middle textual node: two chain neighbors plus the same-utterance pair.
    const auto middle = to_nodes(g3, g3.connected(g3.index_of({1, Modality::text})));
    CHECK(middle == std::set<NodeId>{{0, Modality::text},
                                     {2, Modality::text},
                                     {1, Modality::visual},
                                     {1, Modality::acoustic}});

    const ConversationGraph g1 = ConversationGraph::build(1);
    const auto lone = to_nodes(g1, g1.connected(g1.index_of({0, Modality::text})));
    CHECK(lone == std::set<NodeId>{{0, Modality::visual}, {0, Modality::acoustic}});

    const auto boundary = to_nodes(g3, g3.connected(g3.index_of({0, Modality::text})));
    CHECK(boundary == std::set<NodeId>{{1, Modality::text},
                                       {0, Modality::visual},
                                       {0, Modality::acoustic}});
}

TEST_CASE("graph: disconnected neighborhoods") {
    const ConversationGraph g3 = ConversationGraph::build(3);
    CHECK(g3.disconnected(g3.index_of({1, Modality::text})).empty());

    const ConversationGraph g5 = ConversationGraph::build(5);
    const auto mid = to_nodes(g5, g5.disconnected(g5.index_of({2, Modality::text})));
    CHECK(mid == std::set<NodeId>{{0, Modality::text}, {4, Modality::text}});

    const auto first_acoustic = to_nodes(g5, g5.disconnected(g5.index_of({0, Modality::acoustic})));
    CHECK(first_acoustic == std::set<NodeId>{{2, Modality::acoustic},
                                             {3, Modality::acoustic},
                                             {4, Modality::acoustic}});
}

TEST_CASE("graph: neighborhoods partition the same-modality nodes") {
    for (const std::size_t n : {1UL, 2UL, 4UL, 7UL}) {
        const ConversationGraph g = ConversationGraph::build(n);
        for (std::uint32_t o = 0; o < g.node_count(); ++o) {
            const auto connected = g.connected(o);
            const auto disconnected = g.disconnected(o);
            std::set<std::uint32_t> c(connected.begin(), connected.end());
            std::set<std::uint32_t> d(disconnected.begin(), disconnected.end());
            CHECK(!c.contains(o));
            CHECK(!d.contains(o));
            for (const std::uint32_t u : d) {
                CHECK(!c.contains(u));
                CHECK(g.node_at(u).modality == g.node_at(o).modality);
            }
            // Connected + disconnected + self covers the target's modality row.
            std::size_t same_modality_covered = 1;  // self
            for (const std::uint32_t u : c) {
                if (g.node_at(u).modality == g.node_at(o).modality) ++same_modality_covered;
            }
            same_modality_covered += d.size();
            CHECK(same_modality_covered == n);
            // Interior nodes have 4 connected neighbors, boundary 3 (for n >= 2).
            if (n >= 2) {
                const std::uint32_t utt = g.node_at(o).utterance;
                const bool interior = utt > 0 && utt + 1 < n;
                CHECK(c.size() == (interior ? 4 : 3));
            }
        }
    }
}

TEST_CASE("graph: construction depends only on the utterance count") {
    // Relabeling utterance contents cannot change the edge set; build twice
    // and compare.
    const ConversationGraph a = ConversationGraph::build(6);
    const ConversationGraph b = ConversationGraph::build(6);
    CHECK(edge_set(a) == edge_set(b));
}

TEST_CASE("graph: masked modality sets") {
    const ModalitySet tv = modality_set_from_string("tv");
    const ConversationGraph g = ConversationGraph::build(4, tv);
    CHECK(g.node_count() == 8);
    CHECK(g.edge_count() == 2 * 3 + 4);  // two chains + one pair per utterance
    CHECK(edge_set(g) == brute_force_edges(4, tv));

    const ConversationGraph solo = ConversationGraph::build(4, modality_set_from_string("a"));
    CHECK(solo.node_count() == 4);
    CHECK(solo.edge_count() == 3);
    CHECK(solo.connected(0).size() == 1);
    CHECK(solo.disconnected(0).size() == 2);

    CHECK_THROWS_AS(g.index_of({0, Modality::acoustic}), ArgumentError);
}

TEST_CASE("graph: unknown nodes raise; storage shuffles keep the edge set") {
    const ConversationGraph g = ConversationGraph::build(3);
    CHECK_THROWS_AS(g.adjacency(9), ArgumentError);
    CHECK_THROWS_AS(g.index_of({3, Modality::text}), ArgumentError);

    ConversationGraph shuffled = ConversationGraph::build(5);
    const auto before = edge_set(shuffled);
    Rng rng(31);
    shuffled.permute_adjacency_storage(rng);
    CHECK(edge_set(shuffled) == before);
    // connected() stays canonical even with shuffled storage.
    const auto c = shuffled.connected(7);
    CHECK(std::is_sorted(c.begin(), c.end()));
}

TEST_CASE("graph: modality parsing and JSON dump") {
    CHECK(to_string(modality_set_from_string("avt")) == "tva");  // canonicalized
    CHECK_THROWS_AS(modality_set_from_string(""), ArgumentError);
    CHECK_THROWS_AS(modality_set_from_string("tt"), ArgumentError);
    CHECK_THROWS_AS(modality_set_from_string("x"), ArgumentError);

    const ConversationGraph g = ConversationGraph::build(1);
    const std::string json = g.to_json_string();
    CHECK(json.find("\"0:t\"") != std::string::npos);
    CHECK(json.find("\"0:v\"") != std::string::npos);
    CHECK(json.find("edges") != std::string::npos);
}
