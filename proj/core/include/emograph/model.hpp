#pragma once

#include <map>
#include <string>
#include <vector>

#include "emograph/aggregate.hpp"
#include "emograph/cluster.hpp"
#include "emograph/dataset.hpp"
#include "emograph/graph.hpp"
#include "emograph/lstm.hpp"
#include "emograph/param_store.hpp"
#include "emograph/tape.hpp"

namespace emograph {

enum class LayerKind { bilevel, mean_gcn };

LayerKind layer_kind_from_string(const std::string& s);
std::string to_string(LayerKind k);

struct ModelConfig {
    // Data-determined.
    std::size_t dim_text = 0, dim_visual = 0, dim_acoustic = 0;
    std::size_t classes = 0;

    // Architecture.
    ModalitySet modalities = all_modalities();
    std::size_t hidden = 16;            // per-direction LSTM size; node dim is 2*hidden
    std::size_t out_dim = 0;            // graph-layer output dim; 0 means node dim
    std::size_t classifier_hidden = 32;
    int gamma = 8;
    double rho = 0.3;
    NeighborhoodConfig neighborhood{};
    LayerKind layer = LayerKind::bilevel;
    std::size_t gcn_layers = 1;         // mean_gcn only
    double dropout = 0.5;

    std::size_t node_dim() const { return 2 * hidden; }
    // The mean-GCN baseline keeps the node dimension so layers stack.
    std::size_t layer_out_dim() const {
        if (layer == LayerKind::mean_gcn) return node_dim();
        return out_dim == 0 ? node_dim() : out_dim;
    }
    std::size_t raw_dim(Modality m) const {
        switch (m) {
            case Modality::text: return dim_text;
            case Modality::visual: return dim_visual;
            case Modality::acoustic: return dim_acoustic;
        }
        return 0;
    }
    ClusterConfig cluster_config() const { return {gamma, rho, neighborhood}; }
    void validate() const;
};

std::string model_config_to_json_string(const ModelConfig& cfg);
ModelConfig model_config_from_json_string(const std::string& text);

// Contextual encoders, one graph layer, and the two-stage classifier.
// Parameters live in a single flat ParamStore; segment declaration order
// is fixed, so checkpoints and flat gradients line up deterministically.
class Model {
public:
    explicit Model(ModelConfig cfg);

    const ModelConfig& config() const noexcept { return cfg_; }
    ParamStore& params() noexcept { return store_; }
    const ParamStore& params() const noexcept { return store_; }

    // Seeds every segment from a name-keyed substream of root_seed.
    void init_params(std::uint64_t root_seed);

    // Contextual embeddings for every graph node, canonical order.
    std::vector<Var> encode(Tape& tape, const Conversation& conv) const;

    // Per-utterance class logits for one conversation.
    std::vector<Var> utterance_logits(Tape& tape, const Conversation& conv,
                                      const DropoutSpec& dropout) const;

    // Per-utterance cross-entropy losses (scalar nodes).
    std::vector<Var> utterance_losses(Tape& tape, const Conversation& conv,
                                      const DropoutSpec& dropout) const;

    // Mean of the per-utterance losses.
    Var conversation_loss(Tape& tape, const Conversation& conv, const DropoutSpec& dropout) const;

    // Probability vectors per utterance. Training mode applies dropout and
    // requires an rng; eval mode is deterministic.
    std::vector<Vector> forward_probs(const Conversation& conv, bool training = false,
                                      Rng* rng = nullptr);

    std::vector<std::size_t> predict_labels(const Conversation& conv);

    DropoutSpec eval_dropout() const { return {cfg_.dropout, false, nullptr}; }
    DropoutSpec train_dropout(Rng& rng) const { return {cfg_.dropout, true, &rng}; }

private:
    void check_conversation(const Conversation& conv) const;

    ModelConfig cfg_;
    ParamStore store_;
    std::map<Modality, BiLstmSegments> encoders_;
    BilevelSegments bilevel_;
    std::vector<ParamStore::SegId> gcn_w_;
    ParamStore::SegId cls_w1_ = 0, cls_b1_ = 0, cls_w2_ = 0, cls_b2_ = 0;
};

// Smallest index attaining the maximal probability.
std::size_t predict_class(const Vector& probs);

}  // namespace emograph
