#include "emograph/checkpoint.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "emograph/error.hpp"

namespace emograph {

using nlohmann::json;

namespace {
constexpr const char* kFormat = "emograph.checkpoint/1";
}

void save_checkpoint(const std::filesystem::path& path, const Model& model,
                     const std::vector<std::string>& labels, std::size_t epoch,
                     const Metrics* final_metrics) {
    json j;
    j["format"] = kFormat;
    j["config"] = json::parse(model_config_to_json_string(model.config()));
    j["labels"] = labels;
    j["epoch"] = epoch;
    if (final_metrics != nullptr) {
        j["metrics"] = json::parse(metrics_to_json_string(*final_metrics));
    }
    j["segments"] = json::array();
    for (const ParamStore::Segment& s : model.params().segments()) {
        j["segments"].push_back(
            {{"name", s.name}, {"offset", s.offset}, {"rows", s.rows}, {"cols", s.cols}});
    }
    std::span<const double> values = model.params().values();
    j["values"] = std::vector<double>(values.begin(), values.end());

    std::ofstream out(path);
    if (!out) throw DataError(DataError::Kind::parse, "cannot write " + path.string());
    out << j.dump() << '\n';
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(DataError::Kind::parse, "cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(DataError::Kind::parse, path.string() + ": " + e.what());
    }
    if (!j.contains("format") || j.at("format").get<std::string>() != kFormat) {
        throw DataError(DataError::Kind::schema, path.string() + ": not an emograph checkpoint");
    }

    const ModelConfig cfg = model_config_from_json_string(j.at("config").dump());
    LoadedCheckpoint loaded{Model(cfg), {}, 0};
    loaded.labels = j.at("labels").get<std::vector<std::string>>();
    if (loaded.labels.size() != cfg.classes) {
        throw DataError(DataError::Kind::schema, "checkpoint label vocabulary size mismatch");
    }
    loaded.epoch = j.contains("epoch") ? j.at("epoch").get<std::size_t>() : 0;

    const auto values = j.at("values").get<std::vector<double>>();
    if (values.size() != loaded.model.params().size()) {
        throw DataError(DataError::Kind::dimension,
                        "checkpoint has " + std::to_string(values.size()) +
                            " parameters, model expects " +
                            std::to_string(loaded.model.params().size()));
    }
    if (!all_finite(values)) {
        throw NumericError("checkpoint contains non-finite parameters");
    }
    std::copy(values.begin(), values.end(), loaded.model.params().values().begin());
    return loaded;
}

void check_compatible(const Model& model, const std::vector<std::string>& labels,
                      const Dataset& ds) {
    const ModelConfig& cfg = model.config();
    for (const Modality m : cfg.modalities) {
        if (ds.feature_dim(m) != cfg.raw_dim(m)) {
            throw DimensionError(std::string("dataset modality '") + modality_tag(m) +
                                 "' has dimension " + std::to_string(ds.feature_dim(m)) +
                                 ", checkpoint expects " + std::to_string(cfg.raw_dim(m)) +
                                 " (segment encoder." + modality_tag(m) + ".fwd.w_in)");
        }
    }
    if (ds.labels != labels) {
        throw DataError(DataError::Kind::schema,
                        "dataset label vocabulary does not match the checkpoint's "
                        "(segment classifier.logits.weight)");
    }
}

}  // namespace emograph
