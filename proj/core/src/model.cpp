#include "emograph/model.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "emograph/error.hpp"
#include "emograph/ops.hpp"

namespace emograph {

using nlohmann::json;

LayerKind layer_kind_from_string(const std::string& s) {
    if (s == "bilevel") return LayerKind::bilevel;
    if (s == "mean_gcn") return LayerKind::mean_gcn;
    throw ArgumentError("unknown layer kind '" + s + "'");
}

std::string to_string(LayerKind k) {
    return k == LayerKind::bilevel ? "bilevel" : "mean_gcn";
}

void ModelConfig::validate() const {
    if (classes < 2) throw ConfigError("model: need at least two classes");
    if (hidden == 0) throw ConfigError("model: hidden size must be positive");
    if (classifier_hidden == 0) throw ConfigError("model: classifier_hidden must be positive");
    if (modalities.empty()) throw ConfigError("model: at least one modality required");
    for (const Modality m : modalities) {
        if (raw_dim(m) == 0) {
            throw ConfigError(std::string("model: modality '") + modality_tag(m) +
                              "' has no feature dimension");
        }
    }
    if (gamma < 1) throw ConfigError("model: gamma must be >= 1");
    if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("model: rho must lie in [0, 1]");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("model: dropout must lie in [0, 1)");
    if (layer == LayerKind::mean_gcn && gcn_layers == 0) {
        throw ConfigError("model: mean_gcn needs at least one layer");
    }
    if (layer == LayerKind::bilevel && gcn_layers != 1) {
        throw ConfigError("model: gcn_layers applies to the mean_gcn baseline only");
    }
    cluster_config().validate();
}

std::string model_config_to_json_string(const ModelConfig& cfg) {
    json j;
    j["dim_t"] = cfg.dim_text;
    j["dim_v"] = cfg.dim_visual;
    j["dim_a"] = cfg.dim_acoustic;
    j["classes"] = cfg.classes;
    j["modalities"] = to_string(cfg.modalities);
    j["hidden"] = cfg.hidden;
    j["out_dim"] = cfg.out_dim;
    j["classifier_hidden"] = cfg.classifier_hidden;
    j["gamma"] = cfg.gamma;
    j["rho"] = cfg.rho;
    j["neighborhood"] = to_string(cfg.neighborhood);
    j["layer"] = to_string(cfg.layer);
    j["gcn_layers"] = cfg.gcn_layers;
    j["dropout"] = cfg.dropout;
    return j.dump(2);
}

ModelConfig model_config_from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model config: ") + e.what());
    }
    static const std::set<std::string> known = {
        "dim_t",  "dim_v",        "dim_a", "classes",      "modalities", "hidden",
        "out_dim", "classifier_hidden", "gamma", "rho",   "neighborhood", "layer",
        "gcn_layers", "dropout"};
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) throw ConfigError("model config: unknown key '" + key + "'");
    }
    ModelConfig cfg;
    try {
        cfg.dim_text = j.at("dim_t").get<std::size_t>();
        cfg.dim_visual = j.at("dim_v").get<std::size_t>();
        cfg.dim_acoustic = j.at("dim_a").get<std::size_t>();
        cfg.classes = j.at("classes").get<std::size_t>();
        if (j.contains("modalities")) {
            cfg.modalities = modality_set_from_string(j.at("modalities").get<std::string>());
        }
        if (j.contains("hidden")) cfg.hidden = j.at("hidden").get<std::size_t>();
        if (j.contains("out_dim")) cfg.out_dim = j.at("out_dim").get<std::size_t>();
        if (j.contains("classifier_hidden")) {
            cfg.classifier_hidden = j.at("classifier_hidden").get<std::size_t>();
        }
        if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<int>();
        if (j.contains("rho")) cfg.rho = j.at("rho").get<double>();
        if (j.contains("neighborhood")) {
            cfg.neighborhood =
                neighborhood_config_from_string(j.at("neighborhood").get<std::string>());
        }
        if (j.contains("layer")) cfg.layer = layer_kind_from_string(j.at("layer").get<std::string>());
        if (j.contains("gcn_layers")) cfg.gcn_layers = j.at("gcn_layers").get<std::size_t>();
        if (j.contains("dropout")) cfg.dropout = j.at("dropout").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

Model::Model(ModelConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    for (const Modality m : cfg_.modalities) {
        encoders_.emplace(m, declare_bilstm(store_, std::string("encoder.") + modality_tag(m),
                                            cfg_.raw_dim(m), cfg_.hidden));
    }
    if (cfg_.layer == LayerKind::bilevel) {
        bilevel_ = declare_bilevel(store_, "bilevel", cfg_.gamma, cfg_.node_dim(),
                                   cfg_.layer_out_dim());
    } else {
        for (std::size_t k = 0; k < cfg_.gcn_layers; ++k) {
            gcn_w_.push_back(store_.add_matrix("gcn.layer" + std::to_string(k) + ".weight",
                                               cfg_.node_dim(), cfg_.node_dim()));
        }
    }
    const std::size_t cls_in = cfg_.modalities.size() * cfg_.layer_out_dim();
    cls_w1_ = store_.add_matrix("classifier.hidden.weight", cfg_.classifier_hidden, cls_in);
    cls_b1_ = store_.add_vector("classifier.hidden.bias", cfg_.classifier_hidden);
    cls_w2_ = store_.add_matrix("classifier.logits.weight", cfg_.classes, cfg_.classifier_hidden);
    cls_b2_ = store_.add_vector("classifier.logits.bias", cfg_.classes);
    store_.finalize();
}

void Model::init_params(std::uint64_t root_seed) {
    for (auto& [m, segs] : encoders_) init_bilstm(store_, segs, root_seed);
    if (cfg_.layer == LayerKind::bilevel) {
        init_bilevel(store_, bilevel_, root_seed);
    } else {
        for (const ParamStore::SegId w : gcn_w_) {
            Rng rng = substream(root_seed, "init." + store_.segment(w).name);
            MatrixView mat = store_.mat(w);
            const double a = std::sqrt(6.0 / static_cast<double>(mat.rows + mat.cols));
            for (std::size_t r = 0; r < mat.rows; ++r) {
                for (std::size_t c = 0; c < mat.cols; ++c) mat.at(r, c) = rng.uniform(-a, a);
            }
        }
    }
    for (const ParamStore::SegId w : {cls_w1_, cls_w2_}) {
        Rng rng = substream(root_seed, "init." + store_.segment(w).name);
        MatrixView mat = store_.mat(w);
        const double a = std::sqrt(6.0 / static_cast<double>(mat.rows + mat.cols));
        for (std::size_t r = 0; r < mat.rows; ++r) {
            for (std::size_t c = 0; c < mat.cols; ++c) mat.at(r, c) = rng.uniform(-a, a);
        }
    }
    for (const ParamStore::SegId b : {cls_b1_, cls_b2_}) {
        std::span<double> bias = store_.seg_values(b);
        std::fill(bias.begin(), bias.end(), 0.0);
    }
}

void Model::check_conversation(const Conversation& conv) const {
    if (conv.utterances.empty()) throw ArgumentError("model: empty conversation " + conv.id);
    for (const Utterance& u : conv.utterances) {
        for (const Modality m : cfg_.modalities) {
            if (u.features(m).size() != cfg_.raw_dim(m)) {
                throw DimensionError("model: utterance " + conv.id + "/" + u.id + " modality '" +
                                     modality_tag(m) + "' has dimension " +
                                     std::to_string(u.features(m).size()) + ", expected " +
                                     std::to_string(cfg_.raw_dim(m)) + " (segment encoder." +
                                     modality_tag(m) + ")");
            }
            if (u.label >= cfg_.classes) {
                throw ArgumentError("model: utterance " + conv.id + "/" + u.id +
                                    " label out of range");
            }
        }
    }
}

std::vector<Var> Model::encode(Tape& tape, const Conversation& conv) const {
    check_conversation(conv);
    const std::size_t n = conv.utterances.size();
    const std::size_t m = cfg_.modalities.size();
    std::vector<Var> features(n * m);
    for (std::size_t r = 0; r < m; ++r) {
        const Modality mod = cfg_.modalities[r];
        std::vector<Var> inputs;
        inputs.reserve(n);
        for (const Utterance& u : conv.utterances) inputs.push_back(tape.input(u.features(mod)));
        const std::vector<Var> embedded = bilstm_encode(tape, inputs, encoders_.at(mod));
        for (std::size_t i = 0; i < n; ++i) features[i * m + r] = embedded[i];
    }
    return features;
}

std::vector<Var> Model::utterance_logits(Tape& tape, const Conversation& conv,
                                         const DropoutSpec& dropout) const {
    const std::size_t n = conv.utterances.size();
    const std::size_t m = cfg_.modalities.size();
    const ConversationGraph graph = ConversationGraph::build(n, cfg_.modalities);

    std::vector<Var> features = encode(tape, conv);
    if (cfg_.layer == LayerKind::bilevel) {
        features = bilevel_layer(tape, graph, features, bilevel_, cfg_.cluster_config(), dropout);
    } else {
        for (const ParamStore::SegId w : gcn_w_) {
            features = mean_gcn_layer(tape, graph, features, w);
        }
    }

    std::vector<Var> logits(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Var> parts;
        parts.reserve(m);
        for (std::size_t r = 0; r < m; ++r) parts.push_back(features[i * m + r]);
        Var joined = tape.concat(parts);
        if (dropout.training && dropout.rate > 0.0) {
            if (dropout.rng == nullptr) throw ArgumentError("model: dropout requires an rng");
            joined = tape.dropout(joined, dropout.rate, *dropout.rng, true);
        }
        const Var hidden = tape.relu(tape.linear(cls_w1_, cls_b1_, joined));
        logits[i] = tape.linear(cls_w2_, cls_b2_, hidden);
    }
    return logits;
}

std::vector<Var> Model::utterance_losses(Tape& tape, const Conversation& conv,
                                         const DropoutSpec& dropout) const {
    const std::vector<Var> logits = utterance_logits(tape, conv, dropout);
    std::vector<Var> losses(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        losses[i] = tape.softmax_cross_entropy(logits[i], conv.utterances[i].label).loss;
    }
    return losses;
}

Var Model::conversation_loss(Tape& tape, const Conversation& conv,
                             const DropoutSpec& dropout) const {
    const std::vector<Var> losses = utterance_losses(tape, conv, dropout);
    return tape.mean_scalars(losses);
}

std::vector<Vector> Model::forward_probs(const Conversation& conv, bool training, Rng* rng) {
    Tape tape(&store_);
    DropoutSpec dropout{cfg_.dropout, training, rng};
    if (training && cfg_.dropout > 0.0 && rng == nullptr) {
        throw ArgumentError("model: training-mode forward requires an rng");
    }
    const std::vector<Var> logits = utterance_logits(tape, conv, dropout);
    std::vector<Vector> probs;
    probs.reserve(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs.push_back(
            softmax_cross_entropy(tape.value(logits[i]), conv.utterances[i].label).probs);
    }
    return probs;
}

std::vector<std::size_t> Model::predict_labels(const Conversation& conv) {
    const std::vector<Vector> probs = forward_probs(conv);
    std::vector<std::size_t> out;
    out.reserve(probs.size());
    for (const Vector& p : probs) out.push_back(predict_class(p));
    return out;
}

std::size_t predict_class(const Vector& probs) { return argmax(probs); }

}  // namespace emograph
