#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emograph/metrics.hpp"
#include "emograph/model.hpp"

namespace emograph {

// Self-describing JSON checkpoint: config echo, label vocabulary, named
// segment table and the flat parameter array (round-trip exact doubles).
void save_checkpoint(const std::filesystem::path& path, const Model& model,
                     const std::vector<std::string>& labels, std::size_t epoch,
                     const Metrics* final_metrics = nullptr);

struct LoadedCheckpoint {
    Model model;
    std::vector<std::string> labels;
    std::size_t epoch = 0;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

// Raises unless the dataset's dimensions and label vocabulary match what
// the checkpointed model was trained on; errors name the first mismatched
// segment.
void check_compatible(const Model& model, const std::vector<std::string>& labels,
                      const Dataset& ds);

}  // namespace emograph
