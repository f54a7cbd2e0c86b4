#include <doctest.h>

#include <cmath>
#include <vector>

#include "emograph/aggregate.hpp"
#include "emograph/error.hpp"
#include "test_util.hpp"

using namespace emograph;
using emograph::test::random_vector;

namespace {

struct Fixture {
    ParamStore store;
    BilevelSegments segs;

    Fixture(int gamma, std::size_t dim, std::size_t out_dim, std::uint64_t seed) {
        segs = declare_bilevel(store, "bilevel", gamma, dim, out_dim);
        store.finalize();
        init_bilevel(store, segs, seed);
    }

    void set_identity_cluster(int r) {
        MatrixView w = store.mat(segs.cluster_w[static_cast<std::size_t>(r)]);
        for (std::size_t i = 0; i < w.rows; ++i) {
            for (std::size_t j = 0; j < w.cols; ++j) w.at(i, j) = i == j ? 1.0 : 0.0;
        }
        for (double& b : store.seg_values(segs.cluster_b[static_cast<std::size_t>(r)])) b = 0.0;
    }
};

// Plain double-loop oracle for the first level: per cluster, sum the
// affine transforms and divide by the member count.
std::vector<std::vector<double>> first_level_oracle(const ParamStore& store,
                                                    const BilevelSegments& segs,
                                                    const ClusterAssignment& a,
                                                    const std::vector<Vector>& features) {
    const std::size_t d = segs.dim;
    std::vector<std::vector<double>> sums(static_cast<std::size_t>(segs.gamma) + 1,
                                          std::vector<double>(d, 0.0));
    std::vector<std::size_t> counts(sums.size(), 0);
    for (const auto& [node, id] : a.members) {
        const auto r = static_cast<std::size_t>(id);
        ConstMatrixView w = store.cmat(segs.cluster_w[r]);
        std::span<const double> b = store.seg_values(segs.cluster_b[r]);
        for (std::size_t i = 0; i < d; ++i) {
            double acc = b[i];
            for (std::size_t j = 0; j < d; ++j) acc += w.at(i, j) * features[node][j];
            sums[r][i] += acc;
        }
        counts[r] += 1;
    }
    for (std::size_t r = 0; r < sums.size(); ++r) {
        if (counts[r] == 0) continue;
        for (double& x : sums[r]) x /= static_cast<double>(counts[r]);
    }
    return sums;
}

}  // namespace

TEST_CASE("first_level: single member with the identity transform passes through") {
    Fixture f(2, 3, 3, 51);
    f.set_identity_cluster(1);
    Tape tape(&f.store);
    const Vector g_u{0.5, -1.0, 2.0};
    const std::vector<Var> features{tape.input(g_u)};
    ClusterAssignment a;
    a.target = 0;
    a.members = {{0, 1}};
    const VirtualNodes out = first_level(tape, a, features, f.segs);
    CHECK(tape.value(out.nodes[1]) == g_u);
    CHECK(!out.empty[1]);
    CHECK(out.empty[0]);
    CHECK(out.empty[2]);
    CHECK(tape.value(out.nodes[0]) == Vector(3));
}

TEST_CASE("first_level: opposite members cancel under the identity transform") {
    Fixture f(1, 2, 2, 52);
    f.set_identity_cluster(0);
    Tape tape(&f.store);
    const Vector v{1.5, -2.5};
    Vector neg(2);
    neg[0] = -v[0];
    neg[1] = -v[1];
    const std::vector<Var> features{tape.input(v), tape.input(neg)};
    ClusterAssignment a;
    a.members = {{0, 0}, {1, 0}};
    const VirtualNodes out = first_level(tape, a, features, f.segs);
    CHECK(tape.value(out.nodes[0]) == Vector{0.0, 0.0});
}

TEST_CASE("first_level: random members match the sum/divide oracle") {
    Rng rng(53);
    Fixture f(2, 4, 4, 54);
    Tape tape(&f.store);
    std::vector<Vector> values;
    std::vector<Var> features;
    for (int i = 0; i < 5; ++i) {
        values.push_back(random_vector(4, rng));
        features.push_back(tape.input(values.back()));
    }
    ClusterAssignment a;
    a.members = {{0, 0}, {1, 2}, {2, 0}, {3, 1}, {4, 0}};
    const VirtualNodes out = first_level(tape, a, features, f.segs);
    const auto expect = first_level_oracle(f.store, f.segs, a, values);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(tape.value(out.nodes[r])[i] == doctest::Approx(expect[r][i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("first_level: duplicated members leave the cluster mean unchanged") {
    Rng rng(55);
    Fixture f(1, 3, 3, 56);
    Tape tape(&f.store);
    const Vector x = random_vector(3, rng);
    const Vector y = random_vector(3, rng);
    const std::vector<Var> features{tape.input(x), tape.input(y)};

    ClusterAssignment once;
    once.members = {{0, 0}, {1, 0}};
    ClusterAssignment twice;
    twice.members = {{0, 0}, {1, 0}, {0, 0}, {1, 0}};

    const VirtualNodes a = first_level(tape, once, features, f.segs);
    const VirtualNodes b = first_level(tape, twice, features, f.segs);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(tape.value(a.nodes[0])[i] ==
              doctest::Approx(tape.value(b.nodes[0])[i]).epsilon(1e-12));
    }
}

TEST_CASE("first_level: out-of-range cluster ids raise") {
    Fixture f(1, 2, 2, 57);
    Tape tape(&f.store);
    const std::vector<Var> features{tape.input(Vector{1.0, 2.0})};
    ClusterAssignment a;
    a.members = {{0, 2}};  // gamma = 1, so ids stop at 1
    CHECK_THROWS_AS(first_level(tape, a, features, f.segs), ArgumentError);
}

TEST_CASE("second_level: block-selecting fuse matrix recovers ReLU(g)") {
    Fixture f(1, 2, 2, 58);
    // fuse weight is out_dim x (gamma+2)*dim = 2 x 6; select the target block.
    MatrixView w = f.store.mat(f.segs.fuse_w);
    for (std::size_t i = 0; i < w.rows; ++i) {
        for (std::size_t j = 0; j < w.cols; ++j) w.at(i, j) = 0.0;
    }
    w.at(0, 4) = 1.0;
    w.at(1, 5) = 1.0;

    Tape tape(&f.store);
    VirtualNodes virtual_nodes;
    virtual_nodes.nodes = {tape.zeros(2), tape.zeros(2)};
    virtual_nodes.empty = {true, true};
    const Var g = tape.input(Vector{0.7, -0.4});
    const Var h = second_level(tape, virtual_nodes, g, f.segs, DropoutSpec{});
    CHECK(tape.value(h) == Vector{0.7, 0.0});

    // Zero fuse matrix gives the zero output.
    for (std::size_t i = 0; i < w.rows; ++i) {
        for (std::size_t j = 0; j < w.cols; ++j) w.at(i, j) = 0.0;
    }
    Tape tape2(&f.store);
    VirtualNodes vn2;
    vn2.nodes = {tape2.zeros(2), tape2.zeros(2)};
    vn2.empty = {true, true};
    const Var h2 = second_level(tape2, vn2, tape2.input(Vector{0.7, -0.4}), f.segs, DropoutSpec{});
    CHECK(tape2.value(h2) == Vector{0.0, 0.0});
}

TEST_CASE("second_level: random instance matches a dense multiply oracle") {
    Rng rng(59);
    Fixture f(2, 3, 4, 60);
    Tape tape(&f.store);
    VirtualNodes vn;
    std::vector<Vector> evs;
    for (int r = 0; r < 3; ++r) {
        evs.push_back(random_vector(3, rng));
        vn.nodes.push_back(tape.input(evs.back()));
        vn.empty.push_back(false);
    }
    const Vector g = random_vector(3, rng);
    const Var h = second_level(tape, vn, tape.input(g), f.segs, DropoutSpec{});

    std::vector<double> joined;
    for (const Vector& e : evs) joined.insert(joined.end(), e.data(), e.data() + e.size());
    joined.insert(joined.end(), g.data(), g.data() + g.size());
    ConstMatrixView w = f.store.cmat(f.segs.fuse_w);
    for (std::size_t i = 0; i < 4; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < joined.size(); ++j) acc += w.at(i, j) * joined[j];
        acc = acc > 0.0 ? acc : 0.0;
        CHECK(tape.value(h)[i] == doctest::Approx(acc).epsilon(1e-12));
    }
}

namespace {

// End-to-end straight-line re-implementation of one bilevel pass, plain
// doubles only.
std::vector<std::vector<double>> bilevel_oracle(const ParamStore& store,
                                                const BilevelSegments& segs,
                                                const ConversationGraph& g,
                                                const std::vector<Vector>& features,
                                                const ClusterConfig& cfg) {
    std::vector<std::vector<double>> out;
    for (std::uint32_t o = 0; o < g.node_count(); ++o) {
        const ClusterAssignment a = build_clusters(g, o, features, cfg);
        const auto virtual_nodes = first_level_oracle(store, segs, a, features);
        std::vector<double> joined;
        for (const auto& e : virtual_nodes) joined.insert(joined.end(), e.begin(), e.end());
        joined.insert(joined.end(), features[o].data(), features[o].data() + features[o].size());
        ConstMatrixView w = store.cmat(segs.fuse_w);
        std::vector<double> h(segs.out_dim);
        for (std::size_t i = 0; i < segs.out_dim; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < joined.size(); ++j) acc += w.at(i, j) * joined[j];
            h[i] = acc > 0.0 ? acc : 0.0;
        }
        out.push_back(std::move(h));
    }
    return out;
}

}  // namespace

TEST_CASE("bilevel_layer: defined on a single-utterance conversation") {
    Fixture f(2, 4, 4, 61);
    Rng rng(62);
    const ConversationGraph g = ConversationGraph::build(1);
    Tape tape(&f.store);
    std::vector<Var> features;
    for (std::size_t i = 0; i < 3; ++i) features.push_back(tape.input(random_vector(4, rng)));
    const auto out = bilevel_layer(tape, g, features, f.segs, ClusterConfig{2, 0.3, {}},
                                   DropoutSpec{});
    CHECK(out.size() == 3);
    for (const Var h : out) CHECK(tape.value(h).size() == 4);
}

TEST_CASE("bilevel_layer: identical features give identical outputs everywhere") {
    Fixture f(3, 4, 4, 63);
    const ConversationGraph g = ConversationGraph::build(4);
    Tape tape(&f.store);
    const Vector shared{0.4, -0.2, 1.0, 0.8};
    std::vector<Var> features;
    for (std::size_t i = 0; i < g.node_count(); ++i) features.push_back(tape.input(shared));
    const auto out =
        bilevel_layer(tape, g, features, f.segs, ClusterConfig{3, 0.3, {}}, DropoutSpec{});
    // Interior/boundary neighborhoods differ in size, but every member sits
    // in the top cluster with the same value, so the mean is identical.
    for (std::size_t i = 1; i < out.size(); ++i) {
        CHECK(tape.value(out[i]) == tape.value(out[0]));
    }
}

TEST_CASE("bilevel_layer: matches the straight-line oracle on a random conversation") {
    Rng rng(64);
    Fixture f(4, 6, 5, 65);
    const ConversationGraph g = ConversationGraph::build(4);
    const ClusterConfig cfg{4, 0.3, {}};
    std::vector<Vector> values;
    Tape tape(&f.store);
    std::vector<Var> features;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        values.push_back(random_vector(6, rng));
        features.push_back(tape.input(values.back()));
    }
    const auto out = bilevel_layer(tape, g, features, f.segs, cfg, DropoutSpec{});
    const auto expect = bilevel_oracle(f.store, f.segs, g, values, cfg);
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t k = 0; k < 5; ++k) {
            CHECK(tape.value(out[i])[k] == doctest::Approx(expect[i][k]).epsilon(1e-10));
        }
    }
}

TEST_CASE("bilevel_layer: bit-identical under adjacency storage shuffles") {
    Rng rng(66);
    Fixture f(3, 4, 4, 67);
    const ClusterConfig cfg{3, 0.3, {}};
    std::vector<Vector> values;
    for (std::size_t i = 0; i < 18; ++i) values.push_back(random_vector(4, rng));

    // Reference pass on the freshly built graph.
    std::vector<Vector> reference;
    {
        const ConversationGraph g = ConversationGraph::build(6);
        Tape tape(&f.store);
        std::vector<Var> features;
        for (const Vector& v : values) features.push_back(tape.input(v));
        for (const Var h : bilevel_layer(tape, g, features, f.segs, cfg, DropoutSpec{})) {
            reference.push_back(tape.value(h));
        }
    }

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        ConversationGraph g = ConversationGraph::build(6);
        Rng shuffle_rng(seed);
        g.permute_adjacency_storage(shuffle_rng);
        Tape tape(&f.store);
        std::vector<Var> features;
        for (const Vector& v : values) features.push_back(tape.input(v));
        const auto out = bilevel_layer(tape, g, features, f.segs, cfg, DropoutSpec{});
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(tape.value(out[i]) == reference[i]);  // bitwise
        }
    }
}

TEST_CASE("bilevel: gradient flow through all parameters") {
    Rng rng(68);
    ParamStore store;
    const BilevelSegments segs = declare_bilevel(store, "bilevel", 2, 4, 4);
    const auto probe = store.add_matrix("probe", 1, 4 * 9);  // 9 nodes on a 3-utterance graph
    store.finalize();
    init_bilevel(store, segs, 69);
    Rng probe_rng(70);
    for (double& v : store.seg_values(probe)) v = probe_rng.uniform(-0.5, 0.5);

    std::vector<Vector> values;
    for (std::size_t i = 0; i < 9; ++i) values.push_back(random_vector(4, rng));
    const ClusterConfig cfg{2, 0.3, {}};

    const auto expr = [&](Tape& tape) {
        const ConversationGraph g = ConversationGraph::build(3);
        std::vector<Var> features;
        for (const Vector& v : values) features.push_back(tape.input(v));
        const auto out = bilevel_layer(tape, g, features, segs, cfg, DropoutSpec{});
        return tape.linear_no_bias(probe, tape.concat(out));
    };
    CHECK(emograph::test::fd_max_rel_error(store, expr, 1e-6) < 1e-4);
}

TEST_CASE("mean_gcn_layer: identity weight on identical features is a fixed point") {
    ParamStore store;
    const auto w = store.add_matrix("gcn", 3, 3);
    store.finalize();
    MatrixView wv = store.mat(w);
    for (std::size_t i = 0; i < 3; ++i) wv.at(i, i) = 1.0;

    const ConversationGraph g = ConversationGraph::build(3);
    Tape tape(&store);
    const Vector shared{0.5, 1.0, 0.25};  // non-negative so ReLU is inert
    std::vector<Var> features;
    for (std::size_t i = 0; i < g.node_count(); ++i) features.push_back(tape.input(shared));
    for (const Var h : mean_gcn_layer(tape, g, features, w)) {
        CHECK(tape.value(h) == shared);
    }
}

TEST_CASE("mean_gcn_layer: a one-hot feature diffuses to its neighbors") {
    ParamStore store;
    const auto w = store.add_matrix("gcn", 2, 2);
    store.finalize();
    MatrixView wv = store.mat(w);
    wv.at(0, 0) = 1.0;
    wv.at(1, 1) = 1.0;

    const ConversationGraph g = ConversationGraph::build(2);  // 6 nodes
    Tape tape(&store);
    std::vector<Var> features;
    for (std::size_t i = 0; i < 6; ++i) {
        Vector v(2);
        if (i == 0) v[0] = 1.0;  // hot at (0, t)
        features.push_back(tape.input(v));
    }
    const auto out = mean_gcn_layer(tape, g, features, w);
    // (0,t): pool { (0,v),(0,a),(1,t),(0,t) } -> 1/4.
    CHECK(tape.value(out[0])[0] == doctest::Approx(0.25).epsilon(1e-15));
    // (0,v): pool { (0,t),(0,a),(1,v),(0,v) } -> 1/4.
    CHECK(tape.value(out[1])[0] == doctest::Approx(0.25).epsilon(1e-15));
    // (1,t): pool { (0,t),(1,v),(1,a),(1,t) } -> 1/4.
    CHECK(tape.value(out[3])[0] == doctest::Approx(0.25).epsilon(1e-15));
    // (1,v): pool { (1,t),(1,a),(0,v),(1,v) } has no hot member.
    CHECK(tape.value(out[4])[0] == 0.0);
}

TEST_CASE("mean_gcn_layer: stacking drives features toward uniformity") {
    Rng rng(71);
    ParamStore store;
    const auto w = store.add_matrix("gcn", 3, 3);
    store.finalize();
    MatrixView wv = store.mat(w);
    for (std::size_t i = 0; i < 3; ++i) wv.at(i, i) = 1.0;

    const ConversationGraph g = ConversationGraph::build(6);
    const auto pairwise_spread = [&](const std::vector<Vector>& xs) {
        double acc = 0.0;
        for (std::size_t a = 0; a < xs.size(); ++a) {
            for (std::size_t b = a + 1; b < xs.size(); ++b) {
                for (std::size_t k = 0; k < 3; ++k) {
                    acc += std::abs(xs[a][k] - xs[b][k]);
                }
            }
        }
        return acc;
    };

    Tape tape(&store);
    std::vector<Var> features;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        features.push_back(tape.input(random_vector(3, rng, 0.0, 1.0)));
    }
    std::vector<double> spreads;
    std::vector<Var> current = features;
    for (int layer = 0; layer < 4; ++layer) {
        current = mean_gcn_layer(tape, g, current, w);
        std::vector<Vector> xs;
        for (const Var v : current) xs.push_back(tape.value(v));
        spreads.push_back(pairwise_spread(xs));
    }
    CHECK(spreads[3] < spreads[0]);
    CHECK(spreads[3] < spreads[1]);
}
