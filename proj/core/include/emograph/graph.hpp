#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "emograph/rng.hpp"

namespace emograph {

enum class Modality : std::uint8_t { text = 0, visual = 1, acoustic = 2 };

constexpr char modality_tag(Modality m) {
    switch (m) {
        case Modality::text: return 't';
        case Modality::visual: return 'v';
        case Modality::acoustic: return 'a';
    }
    return '?';
}

Modality modality_from_tag(char tag);

// Canonical modality order t, v, a.
using ModalitySet = std::vector<Modality>;

ModalitySet all_modalities();
// Parses strings like "tva", "t", "va"; validates and canonicalizes.
ModalitySet modality_set_from_string(const std::string& s);
std::string to_string(const ModalitySet& ms);

struct NodeId {
    std::uint32_t utterance = 0;
    Modality modality = Modality::text;

    bool operator==(const NodeId&) const = default;
};

// "i:m", e.g. "0:t".
std::string to_string(NodeId id);

// Per-conversation undirected graph: one node per (utterance, modality),
// same-modality nodes chained in conversation order, and the modalities of
// one utterance fully connected. Immutable after construction except for
// permute_adjacency_storage, which reorders storage without changing the
// edge set (results must not depend on it).
class ConversationGraph {
public:
    static ConversationGraph build(std::size_t n_utterances, const ModalitySet& active);
    static ConversationGraph build(std::size_t n_utterances);  // all three modalities

    std::size_t utterance_count() const noexcept { return n_utterances_; }
    const ModalitySet& modalities() const noexcept { return active_; }
    std::size_t node_count() const noexcept { return n_utterances_ * active_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    std::uint32_t index_of(NodeId id) const;
    NodeId node_at(std::uint32_t index) const;

    // Connected neighborhood C(o): all nodes sharing an edge with o.
    // Returned in storage order; callers that need a canonical order sort.
    std::span<const std::uint32_t> adjacency(std::uint32_t index) const;
    std::vector<std::uint32_t> connected(std::uint32_t index) const;  // sorted

    // Disconnected neighborhood D(o): same-modality nodes not adjacent to
    // o and distinct from it (utterance distance >= 2). Sorted.
    std::vector<std::uint32_t> disconnected(std::uint32_t index) const;

    void permute_adjacency_storage(Rng& rng);

    // Adjacency as JSON text: {"nodes": ["0:t", ...], "edges": [["0:t","0:v"], ...]}.
    std::string to_json_string() const;

private:
    std::size_t n_utterances_ = 0;
    ModalitySet active_;
    std::size_t edge_count_ = 0;
    std::vector<std::vector<std::uint32_t>> adj_;
};

}  // namespace emograph
