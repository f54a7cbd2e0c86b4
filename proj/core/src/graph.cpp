#include "emograph/graph.hpp"

#include <algorithm>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "emograph/error.hpp"

namespace emograph {

Modality modality_from_tag(char tag) {
    switch (tag) {
        case 't': return Modality::text;
        case 'v': return Modality::visual;
        case 'a': return Modality::acoustic;
        default: throw ArgumentError(std::string("unknown modality tag '") + tag + "'");
    }
}

ModalitySet all_modalities() {
    return {Modality::text, Modality::visual, Modality::acoustic};
}

ModalitySet modality_set_from_string(const std::string& s) {
    if (s.empty()) throw ArgumentError("modality set must not be empty");
    bool seen[3] = {false, false, false};
    for (const char c : s) {
        const Modality m = modality_from_tag(c);
        if (seen[static_cast<int>(m)]) {
            throw ArgumentError(std::string("duplicate modality '") + c + "'");
        }
        seen[static_cast<int>(m)] = true;
    }
    ModalitySet out;
    for (const Modality m : all_modalities()) {
        if (seen[static_cast<int>(m)]) out.push_back(m);
    }
    return out;
}

std::string to_string(const ModalitySet& ms) {
    std::string s;
    for (const Modality m : ms) s += modality_tag(m);
    return s;
}

std::string to_string(NodeId id) {
    return std::to_string(id.utterance) + ":" + modality_tag(id.modality);
}

ConversationGraph ConversationGraph::build(std::size_t n_utterances, const ModalitySet& active) {
    if (n_utterances == 0) throw ArgumentError("graph: conversation must have utterances");
    if (active.empty()) throw ArgumentError("graph: at least one modality required");
    for (std::size_t i = 1; i < active.size(); ++i) {
        if (active[i] <= active[i - 1]) throw ArgumentError("graph: modalities must be canonical");
    }

    ConversationGraph g;
    g.n_utterances_ = n_utterances;
    g.active_ = active;
    g.adj_.assign(n_utterances * active.size(), {});

    const std::size_t m = active.size();
    const auto idx = [m](std::size_t utt, std::size_t mod_rank) -> std::uint32_t {
        return static_cast<std::uint32_t>(utt * m + mod_rank);
    };
    const auto link = [&g](std::uint32_t a, std::uint32_t b) {
        g.adj_[a].push_back(b);
        g.adj_[b].push_back(a);
        g.edge_count_ += 1;
    };

    for (std::size_t i = 0; i < n_utterances; ++i) {
        // Modalities of one utterance form a clique.
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t s = r + 1; s < m; ++s) link(idx(i, r), idx(i, s));
        }
        // Same-modality chain in conversation order.
        if (i + 1 < n_utterances) {
            for (std::size_t r = 0; r < m; ++r) link(idx(i, r), idx(i + 1, r));
        }
    }
    return g;
}

ConversationGraph ConversationGraph::build(std::size_t n_utterances) {
    return build(n_utterances, all_modalities());
}

std::uint32_t ConversationGraph::index_of(NodeId id) const {
    if (id.utterance >= n_utterances_) {
        throw ArgumentError("graph: utterance index out of range: " + to_string(id));
    }
    for (std::size_t r = 0; r < active_.size(); ++r) {
        if (active_[r] == id.modality) {
            return static_cast<std::uint32_t>(id.utterance * active_.size() + r);
        }
    }
    throw ArgumentError("graph: modality not active: " + to_string(id));
}

NodeId ConversationGraph::node_at(std::uint32_t index) const {
    if (index >= node_count()) throw ArgumentError("graph: node index out of range");
    NodeId id;
    id.utterance = static_cast<std::uint32_t>(index / active_.size());
    id.modality = active_[index % active_.size()];
    return id;
}

std::span<const std::uint32_t> ConversationGraph::adjacency(std::uint32_t index) const {
    if (index >= node_count()) throw ArgumentError("graph: node index out of range");
    return adj_[index];
}

std::vector<std::uint32_t> ConversationGraph::connected(std::uint32_t index) const {
    std::vector<std::uint32_t> out(adj_.at(index));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> ConversationGraph::disconnected(std::uint32_t index) const {
    if (index >= node_count()) throw ArgumentError("graph: node index out of range");
    const NodeId o = node_at(index);
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < n_utterances_; ++i) {
        const std::size_t d =
            i > o.utterance ? i - o.utterance : static_cast<std::size_t>(o.utterance) - i;
        if (d < 2) continue;  // self, chain neighbors and clique are all within distance 1
        out.push_back(index_of(NodeId{static_cast<std::uint32_t>(i), o.modality}));
    }
    std::sort(out.begin(), out.end());
    return out;
}

void ConversationGraph::permute_adjacency_storage(Rng& rng) {
    for (auto& list : adj_) rng.shuffle(std::span<std::uint32_t>(list));
}

std::string ConversationGraph::to_json_string() const {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (std::uint32_t i = 0; i < node_count(); ++i) j["nodes"].push_back(to_string(node_at(i)));
    j["edges"] = nlohmann::json::array();
    for (std::uint32_t i = 0; i < node_count(); ++i) {
        for (const std::uint32_t other : adj_[i]) {
            if (other > i) j["edges"].push_back({to_string(node_at(i)), to_string(node_at(other))});
        }
    }
    return j.dump();
}

}  // namespace emograph
