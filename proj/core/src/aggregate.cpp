#include "emograph/aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "emograph/error.hpp"

namespace emograph {

namespace {

std::string cluster_name(const std::string& prefix, int r) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d", r);
    return prefix + ".cluster" + buf;
}

void xavier_fill(MatrixView w, Rng& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(w.rows + w.cols));
    for (std::size_t r = 0; r < w.rows; ++r) {
        for (std::size_t c = 0; c < w.cols; ++c) w.at(r, c) = rng.uniform(-a, a);
    }
}

}  // namespace

BilevelSegments declare_bilevel(ParamStore& store, const std::string& prefix, int gamma,
                                std::size_t dim, std::size_t out_dim) {
    if (gamma < 1) throw ArgumentError("bilevel: gamma must be >= 1");
    if (dim == 0 || out_dim == 0) throw ArgumentError("bilevel: dimensions must be positive");
    BilevelSegments segs;
    segs.gamma = gamma;
    segs.dim = dim;
    segs.out_dim = out_dim;
    for (int r = 0; r <= gamma; ++r) {
        segs.cluster_w.push_back(store.add_matrix(cluster_name(prefix, r) + ".weight", dim, dim));
        segs.cluster_b.push_back(store.add_vector(cluster_name(prefix, r) + ".bias", dim));
    }
    segs.fuse_w = store.add_matrix(prefix + ".fuse.weight", out_dim,
                                   static_cast<std::size_t>(gamma + 2) * dim);
    return segs;
}

void init_bilevel(ParamStore& store, const BilevelSegments& segs, std::uint64_t root_seed) {
    for (int r = 0; r <= segs.gamma; ++r) {
        const auto rr = static_cast<std::size_t>(r);
        Rng rng = substream(root_seed, "init." + store.segment(segs.cluster_w[rr]).name);
        xavier_fill(store.mat(segs.cluster_w[rr]), rng);
        std::span<double> b = store.seg_values(segs.cluster_b[rr]);
        std::fill(b.begin(), b.end(), 0.0);
    }
    Rng rng = substream(root_seed, "init." + store.segment(segs.fuse_w).name);
    xavier_fill(store.mat(segs.fuse_w), rng);
}

VirtualNodes first_level(Tape& tape, const ClusterAssignment& assignment,
                         std::span<const Var> features, const BilevelSegments& segs) {
    // Group members by cluster id; assignment.members is already in
    // canonical node order, which fixes the summation order.
    std::vector<std::vector<Var>> transformed(static_cast<std::size_t>(segs.gamma) + 1);
    for (const auto& [node, id] : assignment.members) {
        if (id < 0 || id > segs.gamma) throw ArgumentError("first_level: cluster id out of range");
        if (node >= features.size()) throw ArgumentError("first_level: member outside feature set");
        const auto r = static_cast<std::size_t>(id);
        transformed[r].push_back(tape.linear(segs.cluster_w[r], segs.cluster_b[r], features[node]));
    }

    VirtualNodes out;
    out.nodes.resize(transformed.size());
    out.empty.resize(transformed.size());
    for (std::size_t r = 0; r < transformed.size(); ++r) {
        if (transformed[r].empty()) {
            out.nodes[r] = tape.zeros(segs.dim);
            out.empty[r] = true;
        } else {
            out.nodes[r] = tape.mean(transformed[r]);
            out.empty[r] = false;
        }
    }
    return out;
}

Var second_level(Tape& tape, const VirtualNodes& virtual_nodes, Var target_feature,
                 const BilevelSegments& segs, const DropoutSpec& dropout) {
    if (virtual_nodes.nodes.size() != static_cast<std::size_t>(segs.gamma) + 1) {
        throw DimensionError("second_level: expected gamma+1 virtual nodes");
    }
    std::vector<Var> parts(virtual_nodes.nodes);
    parts.push_back(target_feature);
    Var joined = tape.concat(parts);
    if (dropout.training && dropout.rate > 0.0) {
        if (dropout.rng == nullptr) throw ArgumentError("second_level: dropout requires an rng");
        joined = tape.dropout(joined, dropout.rate, *dropout.rng, true);
    }
    return tape.relu(tape.linear_no_bias(segs.fuse_w, joined));
}

std::vector<Var> bilevel_layer(Tape& tape, const ConversationGraph& g,
                               std::span<const Var> features, const BilevelSegments& segs,
                               const ClusterConfig& cfg, const DropoutSpec& dropout,
                               SimilarityStats* stats) {
    if (features.size() != g.node_count()) {
        throw DimensionError("bilevel_layer: features must cover every node");
    }
    // Cluster building reads detached values; gradients flow through the
    // member features, not the similarity scores.
    std::vector<Vector> frozen;
    frozen.reserve(features.size());
    for (const Var f : features) frozen.push_back(tape.value(f));

    std::vector<Var> out(features.size());
    for (std::uint32_t o = 0; o < features.size(); ++o) {
        const ClusterAssignment assignment = build_clusters(g, o, frozen, cfg, stats);
        const VirtualNodes virtual_nodes = first_level(tape, assignment, features, segs);
        out[o] = second_level(tape, virtual_nodes, features[o], segs, dropout);
    }
    return out;
}

std::vector<Var> mean_gcn_layer(Tape& tape, const ConversationGraph& g,
                                std::span<const Var> features, ParamStore::SegId w) {
    if (features.size() != g.node_count()) {
        throw DimensionError("mean_gcn_layer: features must cover every node");
    }
    std::vector<Var> out(features.size());
    for (std::uint32_t o = 0; o < features.size(); ++o) {
        std::vector<Var> pool;
        for (const std::uint32_t u : g.connected(o)) pool.push_back(features[u]);
        pool.push_back(features[o]);
        out[o] = tape.relu(tape.linear_no_bias(w, tape.mean(pool)));
    }
    return out;
}

}  // namespace emograph
