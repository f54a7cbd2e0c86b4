#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emograph/graph.hpp"
#include "emograph/tensor.hpp"

namespace emograph {

// Which structural neighborhoods feed a target's clusters and where the
// low-similarity filter applies. The default matches the quoted
// configuration: filter on the disconnected neighborhood only.
struct NeighborhoodConfig {
    bool use_connected = true;
    bool use_disconnected = true;
    bool filter_connected = false;
    bool filter_disconnected = true;

    bool operator==(const NeighborhoodConfig&) const = default;
};

// Accepts "cg", "dg", "cg_filtered", "dg_filtered", and '+' combinations
// such as "cg+dg_filtered".
NeighborhoodConfig neighborhood_config_from_string(const std::string& s);
std::string to_string(const NeighborhoodConfig& cfg);

// The eight study variants, in presentation order; the last is the default.
std::vector<NeighborhoodConfig> neighborhood_study_variants();

struct ClusterConfig {
    int gamma = 8;       // cluster granularity; ids run 0..gamma
    double rho = 0.3;    // similarity threshold for filtering
    NeighborhoodConfig neighborhood;

    void validate() const;
};

struct SimilarityStats {
    std::size_t zero_norm_pairs = 0;
};

// Angular similarity in [0, 1]: 1 - angle(u, o)/pi. 1 for parallel, 0.5
// for orthogonal, 0 for antiparallel. A zero-norm input has no direction;
// the result is defined as 0.5 and counted in `stats`.
double angular_similarity(const Vector& u, const Vector& o, SimilarityStats* stats = nullptr);

// floor(gamma * s), or nullopt when the member is filtered out by the
// rho threshold in a filtered neighborhood. s = 1 maps to id gamma.
std::optional<int> cluster_id(double s, bool disconnected_member, const ClusterConfig& cfg);

struct ClusterAssignment {
    std::uint32_t target = 0;
    // Neighborhood members in ascending node-index order with their
    // cluster ids in [0, gamma].
    std::vector<std::pair<std::uint32_t, int>> members;
    // Members removed by the similarity filter, ascending.
    std::vector<std::uint32_t> dropped;
};

// Assigns every configured-neighborhood member of `target` to a cluster.
// `features` is indexed by canonical node index. Member order is canonical
// regardless of the graph's adjacency storage order.
ClusterAssignment build_clusters(const ConversationGraph& g, std::uint32_t target,
                                 std::span<const Vector> features, const ClusterConfig& cfg,
                                 SimilarityStats* stats = nullptr);

// Assignment as JSON text, node ids rendered "i:m".
std::string assignment_to_json_string(const ClusterAssignment& a, const ConversationGraph& g);

}  // namespace emograph
