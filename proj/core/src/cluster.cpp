#include "emograph/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "emograph/error.hpp"

namespace emograph {

NeighborhoodConfig neighborhood_config_from_string(const std::string& s) {
    NeighborhoodConfig cfg;
    cfg.use_connected = cfg.use_disconnected = false;
    cfg.filter_connected = cfg.filter_disconnected = false;
    std::size_t start = 0;
    bool any = false;
    while (start <= s.size()) {
        const std::size_t plus = s.find('+', start);
        const std::string part =
            s.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
        if (part == "cg" || part == "cg_filtered") {
            if (cfg.use_connected) throw ArgumentError("neighborhood: duplicate cg term");
            cfg.use_connected = true;
            cfg.filter_connected = part == "cg_filtered";
        } else if (part == "dg" || part == "dg_filtered") {
            if (cfg.use_disconnected) throw ArgumentError("neighborhood: duplicate dg term");
            cfg.use_disconnected = true;
            cfg.filter_disconnected = part == "dg_filtered";
        } else {
            throw ArgumentError("neighborhood: unknown term '" + part + "' in '" + s + "'");
        }
        any = true;
        if (plus == std::string::npos) break;
        start = plus + 1;
    }
    if (!any) throw ArgumentError("neighborhood: empty specification");
    return cfg;
}

std::string to_string(const NeighborhoodConfig& cfg) {
    std::string s;
    if (cfg.use_connected) s += cfg.filter_connected ? "cg_filtered" : "cg";
    if (cfg.use_disconnected) {
        if (!s.empty()) s += '+';
        s += cfg.filter_disconnected ? "dg_filtered" : "dg";
    }
    return s;
}

std::vector<NeighborhoodConfig> neighborhood_study_variants() {
    const char* names[] = {
        "cg",          "dg",          "cg_filtered",    "dg_filtered",
        "cg+dg",       "cg_filtered+dg", "cg_filtered+dg_filtered", "cg+dg_filtered",
    };
    std::vector<NeighborhoodConfig> out;
    for (const char* n : names) out.push_back(neighborhood_config_from_string(n));
    return out;
}

void ClusterConfig::validate() const {
    if (gamma < 1) throw ArgumentError("cluster: gamma must be >= 1");
    if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("cluster: rho must lie in [0, 1]");
    if (!neighborhood.use_connected && !neighborhood.use_disconnected) {
        throw ArgumentError("cluster: at least one neighborhood must be enabled");
    }
}

double angular_similarity(const Vector& u, const Vector& o, SimilarityStats* stats) {
    if (u.size() != o.size()) throw DimensionError("similarity: dimension mismatch");
    double nu = 0.0, no = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        nu += u[i] * u[i];
        no += o[i] * o[i];
    }
    if (nu == 0.0 || no == 0.0) {
        if (stats != nullptr) stats->zero_norm_pairs += 1;
        return 0.5;  // no direction: maximal uncertainty
    }
    nu = std::sqrt(nu);
    no = std::sqrt(no);
    // angle = 2*atan2(|u^ - o^|, |u^ + o^|). Equal to arccos of the cosine
    // but exact at both endpoints, where arccos of a rounded cosine is off
    // by ~1e-8.
    double diff2 = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u[i] / nu;
        const double b = o[i] / no;
        diff2 += (a - b) * (a - b);
        sum2 += (a + b) * (a + b);
    }
    const double angle = 2.0 * std::atan2(std::sqrt(diff2), std::sqrt(sum2));
    const double s = 1.0 - angle / std::numbers::pi;
    return std::clamp(s, 0.0, 1.0);
}

std::optional<int> cluster_id(double s, bool disconnected_member, const ClusterConfig& cfg) {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw NumericError("cluster: similarity " + std::to_string(s) + " outside [0, 1]");
    }
    const bool filtered =
        disconnected_member ? cfg.neighborhood.filter_disconnected : cfg.neighborhood.filter_connected;
    if (filtered && s < cfg.rho) return std::nullopt;
    return static_cast<int>(std::floor(static_cast<double>(cfg.gamma) * s));
}

ClusterAssignment build_clusters(const ConversationGraph& g, std::uint32_t target,
                                 std::span<const Vector> features, const ClusterConfig& cfg,
                                 SimilarityStats* stats) {
    cfg.validate();
    if (features.size() != g.node_count()) {
        throw DimensionError("cluster: features must cover every node");
    }

    ClusterAssignment out;
    out.target = target;
    const Vector& target_feature = features[target];

    const auto take = [&](const std::vector<std::uint32_t>& members, bool disconnected) {
        for (const std::uint32_t u : members) {
            const double s = angular_similarity(features[u], target_feature, stats);
            if (const auto id = cluster_id(s, disconnected, cfg)) {
                out.members.emplace_back(u, *id);
            } else {
                out.dropped.push_back(u);
            }
        }
    };

    if (cfg.neighborhood.use_connected) take(g.connected(target), false);
    if (cfg.neighborhood.use_disconnected) take(g.disconnected(target), true);

    // Canonical member order, independent of adjacency storage.
    std::sort(out.members.begin(), out.members.end());
    std::sort(out.dropped.begin(), out.dropped.end());
    return out;
}

std::string assignment_to_json_string(const ClusterAssignment& a, const ConversationGraph& g) {
    nlohmann::json j;
    j["target"] = to_string(g.node_at(a.target));
    j["members"] = nlohmann::json::array();
    for (const auto& [node, id] : a.members) {
        j["members"].push_back({{"node", to_string(g.node_at(node))}, {"cluster", id}});
    }
    j["dropped"] = nlohmann::json::array();
    for (const std::uint32_t node : a.dropped) j["dropped"].push_back(to_string(g.node_at(node)));
    return j.dump();
}

}  // namespace emograph
