#pragma once

#include <span>
#include <string>
#include <vector>

#include "emograph/cluster.hpp"
#include "emograph/graph.hpp"
#include "emograph/param_store.hpp"
#include "emograph/rng.hpp"
#include "emograph/tape.hpp"

namespace emograph {

// Parameters of the bilevel aggregation: one affine d->d transform per
// cluster id (gamma+1 of them) and the fusion matrix applied to the
// concatenation of all virtual nodes plus the target's own embedding,
// (gamma+2)*d -> out_dim.
struct BilevelSegments {
    std::vector<ParamStore::SegId> cluster_w;  // gamma+1 entries
    std::vector<ParamStore::SegId> cluster_b;
    ParamStore::SegId fuse_w = 0;
    std::size_t dim = 0;
    std::size_t out_dim = 0;
    int gamma = 0;
};

BilevelSegments declare_bilevel(ParamStore& store, const std::string& prefix, int gamma,
                                std::size_t dim, std::size_t out_dim);
void init_bilevel(ParamStore& store, const BilevelSegments& segs, std::uint64_t root_seed);

struct DropoutSpec {
    double rate = 0.0;
    bool training = false;
    Rng* rng = nullptr;
};

// First level: per cluster id, the mean of the affinely transformed member
// features. Members are accumulated in canonical node order. Empty
// clusters yield the zero vector and are flagged.
struct VirtualNodes {
    std::vector<Var> nodes;    // gamma+1, each of length dim
    std::vector<bool> empty;   // per cluster id
};

VirtualNodes first_level(Tape& tape, const ClusterAssignment& assignment,
                         std::span<const Var> features, const BilevelSegments& segs);

// Second level: ReLU(W * (e_0 || ... || e_gamma || g_target)). Dropout, if
// configured, applies to the concatenated input.
Var second_level(Tape& tape, const VirtualNodes& virtual_nodes, Var target_feature,
                 const BilevelSegments& segs, const DropoutSpec& dropout);

// One bilevel pass over every node: clusters are built from the frozen
// input features, so all targets see the same pre-layer state.
std::vector<Var> bilevel_layer(Tape& tape, const ConversationGraph& g,
                               std::span<const Var> features, const BilevelSegments& segs,
                               const ClusterConfig& cfg, const DropoutSpec& dropout,
                               SimilarityStats* stats = nullptr);

// Comparison baseline: h_o = ReLU(W * mean(connected(o) + {o})). Keeps the
// feature dimension, so it can be stacked.
std::vector<Var> mean_gcn_layer(Tape& tape, const ConversationGraph& g,
                                std::span<const Var> features, ParamStore::SegId w);

}  // namespace emograph
