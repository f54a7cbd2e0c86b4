#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "emograph/graph.hpp"
#include "emograph/tensor.hpp"

namespace emograph {

struct Utterance {
    std::string id;
    std::string speaker;  // carried through, not consumed by the model
    std::size_t label = 0;
    Vector text, visual, acoustic;

    const Vector& features(Modality m) const {
        switch (m) {
            case Modality::text: return text;
            case Modality::visual: return visual;
            case Modality::acoustic: return acoustic;
        }
        return text;
    }
};

struct Conversation {
    std::string id;
    std::vector<Utterance> utterances;
};

enum class Split : std::size_t { train = 0, val = 1, test = 2 };

constexpr const char* split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "?";
}

struct Dataset {
    std::vector<std::string> labels;  // sorted vocabulary
    std::size_t dim_text = 0, dim_visual = 0, dim_acoustic = 0;
    std::vector<Conversation> conversations;
    std::array<std::vector<std::size_t>, 3> splits;  // conversation indices per split

    std::span<const std::size_t> split_indices(Split s) const {
        return splits[static_cast<std::size_t>(s)];
    }
    bool has_split(Split s) const { return !split_indices(s).empty(); }
    std::size_t class_count() const { return labels.size(); }
    std::size_t utterance_count() const;
    std::size_t feature_dim(Modality m) const {
        switch (m) {
            case Modality::text: return dim_text;
            case Modality::visual: return dim_visual;
            case Modality::acoustic: return dim_acoustic;
        }
        return 0;
    }
};

// JSON Lines, one conversation per line:
//   {"id": "...", "utterances": [{"id": "...", "speaker": "...",
//    "label": "...", "t": [...], "v": [...], "a": [...]}]}
// Labels are strings; the vocabulary is their sorted set. All three
// modalities are required, dimensions must be uniform across the dataset,
// and every feature must be finite. Violations raise DataError with the
// offending line/utterance named.
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& ds, const std::filesystem::path& path);

// Seeded conversation-level split. Ratios must be non-negative and sum to
// 1; counts use the largest-remainder rule.
void assign_splits(Dataset& ds, const std::array<double, 3>& ratios, std::uint64_t seed);

// Splits file: {"train": [ids], "val": [ids], "test": [ids]}.
void load_splits(Dataset& ds, const std::filesystem::path& path);
void save_splits(const Dataset& ds, const std::filesystem::path& path);

}  // namespace emograph
