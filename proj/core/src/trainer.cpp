#include "emograph/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "emograph/error.hpp"
#include "emograph/optimizer.hpp"

namespace emograph {

TrainResult train(Model& model, const Dataset& ds, const TrainConfig& cfg) {
    if (!(cfg.lr >= 0.0)) throw ArgumentError("train: learning rate must be non-negative");
    if (cfg.epochs == 0) throw ArgumentError("train: epochs must be positive");
    if (!ds.has_split(Split::train)) throw ArgumentError("train: dataset has no train split");

    std::vector<std::size_t> order(ds.split_indices(Split::train).begin(),
                                   ds.split_indices(Split::train).end());
    const bool has_val = ds.has_split(Split::val);

    AdamState adam(model.params().size());
    Tape tape(&model.params());

    TrainResult result;
    double best_val = -1.0;
    std::vector<double> best_params;
    std::size_t since_best = 0;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng shuffle_rng = substream(cfg.seed, "shuffle", epoch);
        shuffle_rng.shuffle(std::span<std::size_t>(order));

        double loss_sum = 0.0;
        std::size_t utt_sum = 0;
        for (const std::size_t ci : order) {
            const Conversation& conv = ds.conversations[ci];
            Rng dropout_rng = substream(cfg.seed, "dropout", epoch, ci);
            tape.reset();
            const Var loss = model.conversation_loss(tape, conv, model.train_dropout(dropout_rng));
            const double value = tape.value(loss)[0];
            if (!std::isfinite(value)) {
                throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                                   ", conversation " + conv.id);
            }
            loss_sum += value * static_cast<double>(conv.utterances.size());
            utt_sum += conv.utterances.size();
            tape.backward(loss);
            adam_step(model.params().values(), model.params().grads(), adam, cfg.lr);
        }

        EpochRecord record;
        record.epoch = epoch;
        record.train_loss = loss_sum / static_cast<double>(utt_sum);
        if (has_val) {
            const Metrics val = evaluate(model, ds, Split::val);
            record.has_val = true;
            record.val_weighted_f1 = val.weighted_f1;
            if (val.weighted_f1 > best_val) {
                best_val = val.weighted_f1;
                best_params.assign(model.params().values().begin(),
                                   model.params().values().end());
                result.best_epoch = epoch;
                since_best = 0;
            } else {
                since_best += 1;
            }
        }
        result.history.push_back(record);

        if (has_val && cfg.patience > 0 && since_best >= cfg.patience) {
            result.early_stopped = true;
            break;
        }
    }

    if (has_val && !best_params.empty()) {
        std::copy(best_params.begin(), best_params.end(), model.params().values().begin());
    } else {
        result.best_epoch = result.history.empty() ? 0 : result.history.back().epoch;
    }
    return result;
}

Metrics evaluate(Model& model, const Dataset& ds, std::span<const std::size_t> conv_indices) {
    if (conv_indices.empty()) throw ArgumentError("evaluate: empty conversation slice");
    const std::size_t c = ds.class_count();
    std::vector<std::vector<std::size_t>> confusion(c, std::vector<std::size_t>(c, 0));
    for (const std::size_t ci : conv_indices) {
        const Conversation& conv = ds.conversations.at(ci);
        const std::vector<Vector> probs = model.forward_probs(conv);
        for (std::size_t i = 0; i < conv.utterances.size(); ++i) {
            confusion[conv.utterances[i].label][predict_class(probs[i])] += 1;
        }
    }
    return metrics_from_confusion(confusion, ds.labels);
}

Metrics evaluate(Model& model, const Dataset& ds, Split split) {
    if (!ds.has_split(split)) {
        throw ArgumentError(std::string("evaluate: dataset has no ") + split_name(split) +
                            " split");
    }
    return evaluate(model, ds, ds.split_indices(split));
}

double batch_loss(Model& model, const Dataset& ds, std::span<const std::size_t> conv_indices) {
    if (conv_indices.empty()) throw ArgumentError("batch_loss: empty conversation slice");
    Tape tape(&model.params());
    double loss_sum = 0.0;
    std::size_t utt_sum = 0;
    for (const std::size_t ci : conv_indices) {
        const Conversation& conv = ds.conversations.at(ci);
        tape.reset();
        const Var loss = model.conversation_loss(tape, conv, model.eval_dropout());
        loss_sum += tape.value(loss)[0] * static_cast<double>(conv.utterances.size());
        utt_sum += conv.utterances.size();
    }
    return loss_sum / static_cast<double>(utt_sum);
}

GradCheckReport grad_check_model(Model& model, const Dataset& ds,
                                 std::span<const std::size_t> conv_indices, double eps,
                                 double gradient_perturbation) {
    if (conv_indices.empty()) throw ArgumentError("grad_check_model: empty conversation slice");

    const auto loss_fn = [&]() { return batch_loss(model, ds, conv_indices); };
    const auto grad_fn = [&]() {
        // One tape over every utterance loss in the slice; the mean matches
        // batch_loss's utterance weighting.
        Tape tape(&model.params());
        std::vector<Var> losses;
        for (const std::size_t ci : conv_indices) {
            const std::vector<Var> conv_losses =
                model.utterance_losses(tape, ds.conversations.at(ci), model.eval_dropout());
            losses.insert(losses.end(), conv_losses.begin(), conv_losses.end());
        }
        tape.backward(tape.mean_scalars(losses));
        std::vector<double> grads(model.params().grads().begin(), model.params().grads().end());
        if (gradient_perturbation != 0.0 && !grads.empty()) {
            grads[0] += gradient_perturbation;
        }
        return grads;
    };
    return grad_check(loss_fn, grad_fn, model.params(), eps);
}

}  // namespace emograph
