#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "emograph/dataset.hpp"
#include "emograph/gradcheck.hpp"
#include "emograph/metrics.hpp"
#include "emograph/model.hpp"

namespace emograph {

struct TrainConfig {
    double lr = 0.0009;
    std::size_t epochs = 1500;
    std::size_t patience = 100;  // epochs without validation improvement
    std::uint64_t seed = 1;
};

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    bool has_val = false;
    double val_weighted_f1 = 0.0;
};

struct TrainResult {
    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;  // epoch whose parameters the model holds
    bool early_stopped = false;
};

// Per-epoch: seeded shuffle of the train conversations, one Adam step per
// conversation. If a validation split exists, tracks weighted F1 and
// retains the best parameters (restored into the model on return); stops
// after `patience` epochs without improvement. All randomness derives
// from cfg.seed via named substreams.
TrainResult train(Model& model, const Dataset& ds, const TrainConfig& cfg);

Metrics evaluate(Model& model, const Dataset& ds, std::span<const std::size_t> conv_indices);
Metrics evaluate(Model& model, const Dataset& ds, Split split);

// Mean cross-entropy over every utterance of the given conversations,
// eval mode.
double batch_loss(Model& model, const Dataset& ds, std::span<const std::size_t> conv_indices);

// End-to-end finite-difference check of the analytic gradient of
// batch_loss over `conv_indices`, dropout off. `gradient_perturbation` is
// a verification hook: it is added to the first analytic gradient entry so
// callers can confirm the check rejects a wrong gradient.
GradCheckReport grad_check_model(Model& model, const Dataset& ds,
                                 std::span<const std::size_t> conv_indices, double eps,
                                 double gradient_perturbation = 0.0);

}  // namespace emograph
