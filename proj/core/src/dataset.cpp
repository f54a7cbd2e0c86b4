#include "emograph/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "emograph/error.hpp"
#include "emograph/rng.hpp"

namespace emograph {

using nlohmann::json;

std::size_t Dataset::utterance_count() const {
    std::size_t n = 0;
    for (const Conversation& c : conversations) n += c.utterances.size();
    return n;
}

namespace {

Vector parse_features(const json& j, const char* key, const std::string& utt_ref) {
    if (!j.contains(key)) {
        throw DataError(DataError::Kind::schema,
                        "utterance " + utt_ref + " is missing modality '" + key + "'");
    }
    const json& arr = j.at(key);
    if (!arr.is_array() || arr.empty()) {
        throw DataError(DataError::Kind::schema,
                        "utterance " + utt_ref + " modality '" + key + "' must be a non-empty array");
    }
    std::vector<double> xs;
    xs.reserve(arr.size());
    for (const json& x : arr) {
        if (!x.is_number()) {
            throw DataError(DataError::Kind::schema,
                            "utterance " + utt_ref + " modality '" + key + "' has a non-numeric entry");
        }
        const double v = x.get<double>();
        if (!std::isfinite(v)) {
            throw DataError(DataError::Kind::schema,
                            "utterance " + utt_ref + " modality '" + key + "' has a non-finite entry");
        }
        xs.push_back(v);
    }
    return Vector::validated(std::move(xs));
}

void check_dim(std::size_t& dim, const Vector& v, const char* key, const std::string& utt_ref) {
    if (dim == 0) {
        dim = v.size();
    } else if (dim != v.size()) {
        throw DataError(DataError::Kind::dimension,
                        "utterance " + utt_ref + " modality '" + key + "' has dimension " +
                            std::to_string(v.size()) + ", expected " + std::to_string(dim));
    }
}

json features_to_json(const Vector& v) {
    json arr = json::array();
    for (std::size_t i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(DataError::Kind::parse, "cannot open " + path.string());

    Dataset ds;
    std::vector<std::vector<std::string>> raw_labels;  // per conversation, per utterance
    std::set<std::string> vocab;
    std::set<std::string> conversation_ids;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError(DataError::Kind::parse,
                            "line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j.at("id").is_string()) {
            throw DataError(DataError::Kind::schema,
                            "line " + std::to_string(line_no) + ": conversation needs a string 'id'");
        }
        Conversation conv;
        conv.id = j.at("id").get<std::string>();
        if (!conversation_ids.insert(conv.id).second) {
            throw DataError(DataError::Kind::schema, "duplicate conversation id '" + conv.id + "'");
        }
        if (!j.contains("utterances") || !j.at("utterances").is_array() ||
            j.at("utterances").empty()) {
            throw DataError(DataError::Kind::schema,
                            "conversation '" + conv.id + "' needs a non-empty 'utterances' array");
        }
        std::vector<std::string> conv_labels;
        for (const json& ju : j.at("utterances")) {
            Utterance u;
            if (!ju.is_object() || !ju.contains("id") || !ju.at("id").is_string()) {
                throw DataError(DataError::Kind::schema, "conversation '" + conv.id +
                                                             "': every utterance needs a string 'id'");
            }
            u.id = ju.at("id").get<std::string>();
            const std::string ref = conv.id + "/" + u.id;
            if (ju.contains("speaker")) {
                if (!ju.at("speaker").is_string()) {
                    throw DataError(DataError::Kind::schema,
                                    "utterance " + ref + ": 'speaker' must be a string");
                }
                u.speaker = ju.at("speaker").get<std::string>();
            }
            if (!ju.contains("label") || !ju.at("label").is_string()) {
                throw DataError(DataError::Kind::schema,
                                "utterance " + ref + " needs a string 'label'");
            }
            const std::string label = ju.at("label").get<std::string>();
            vocab.insert(label);
            conv_labels.push_back(label);

            u.text = parse_features(ju, "t", ref);
            u.visual = parse_features(ju, "v", ref);
            u.acoustic = parse_features(ju, "a", ref);
            check_dim(ds.dim_text, u.text, "t", ref);
            check_dim(ds.dim_visual, u.visual, "v", ref);
            check_dim(ds.dim_acoustic, u.acoustic, "a", ref);
            conv.utterances.push_back(std::move(u));
        }
        raw_labels.push_back(std::move(conv_labels));
        ds.conversations.push_back(std::move(conv));
    }
    if (ds.conversations.empty()) {
        throw DataError(DataError::Kind::schema, "dataset has no conversations");
    }

    ds.labels.assign(vocab.begin(), vocab.end());  // lexicographic class indices
    for (std::size_t c = 0; c < ds.conversations.size(); ++c) {
        for (std::size_t i = 0; i < ds.conversations[c].utterances.size(); ++i) {
            const auto it = std::lower_bound(ds.labels.begin(), ds.labels.end(), raw_labels[c][i]);
            ds.conversations[c].utterances[i].label =
                static_cast<std::size_t>(it - ds.labels.begin());
        }
    }
    return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError(DataError::Kind::parse, "cannot write " + path.string());
    for (const Conversation& conv : ds.conversations) {
        json j;
        j["id"] = conv.id;
        json utts = json::array();
        for (const Utterance& u : conv.utterances) {
            json ju;
            ju["id"] = u.id;
            if (!u.speaker.empty()) ju["speaker"] = u.speaker;
            ju["label"] = ds.labels.at(u.label);
            ju["t"] = features_to_json(u.text);
            ju["v"] = features_to_json(u.visual);
            ju["a"] = features_to_json(u.acoustic);
            utts.push_back(std::move(ju));
        }
        j["utterances"] = std::move(utts);
        out << j.dump() << '\n';
    }
}

void assign_splits(Dataset& ds, const std::array<double, 3>& ratios, std::uint64_t seed) {
    double sum = 0.0;
    for (const double r : ratios) {
        if (r < 0.0) throw ArgumentError("split: ratios must be non-negative");
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("split: ratios must sum to 1");

    const std::size_t n = ds.conversations.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng = substream(seed, "split");
    rng.shuffle(std::span<std::size_t>(order));

    // Largest-remainder allocation.
    std::array<std::size_t, 3> counts{};
    std::array<double, 3> remainders{};
    std::size_t assigned = 0;
    for (std::size_t s = 0; s < 3; ++s) {
        const double want = ratios[s] * static_cast<double>(n);
        counts[s] = static_cast<std::size_t>(std::floor(want));
        remainders[s] = want - std::floor(want);
        assigned += counts[s];
    }
    while (assigned < n) {
        const std::size_t best = static_cast<std::size_t>(
            std::max_element(remainders.begin(), remainders.end()) - remainders.begin());
        counts[best] += 1;
        remainders[best] = -1.0;
        ++assigned;
    }

    std::size_t at = 0;
    for (std::size_t s = 0; s < 3; ++s) {
        ds.splits[s].assign(order.begin() + static_cast<std::ptrdiff_t>(at),
                            order.begin() + static_cast<std::ptrdiff_t>(at + counts[s]));
        std::sort(ds.splits[s].begin(), ds.splits[s].end());
        at += counts[s];
    }
}

void load_splits(Dataset& ds, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(DataError::Kind::parse, "cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(DataError::Kind::parse, path.string() + ": " + e.what());
    }
    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < ds.conversations.size(); ++i) index_of[ds.conversations[i].id] = i;

    std::set<std::size_t> seen;
    for (const Split s : {Split::train, Split::val, Split::test}) {
        ds.splits[static_cast<std::size_t>(s)].clear();
        const char* key = split_name(s);
        if (!j.contains(key)) continue;
        for (const json& id : j.at(key)) {
            if (!id.is_string()) {
                throw DataError(DataError::Kind::schema,
                                std::string("splits: '") + key + "' entries must be strings");
            }
            const auto it = index_of.find(id.get<std::string>());
            if (it == index_of.end()) {
                throw DataError(DataError::Kind::schema,
                                "splits: unknown conversation id '" + id.get<std::string>() + "'");
            }
            if (!seen.insert(it->second).second) {
                throw DataError(DataError::Kind::schema,
                                "splits: conversation '" + id.get<std::string>() +
                                    "' assigned to more than one split");
            }
            ds.splits[static_cast<std::size_t>(s)].push_back(it->second);
        }
        std::sort(ds.splits[static_cast<std::size_t>(s)].begin(),
                  ds.splits[static_cast<std::size_t>(s)].end());
    }
}

void save_splits(const Dataset& ds, const std::filesystem::path& path) {
    json j;
    for (const Split s : {Split::train, Split::val, Split::test}) {
        json arr = json::array();
        for (const std::size_t i : ds.split_indices(s)) arr.push_back(ds.conversations[i].id);
        j[split_name(s)] = std::move(arr);
    }
    std::ofstream out(path);
    if (!out) throw DataError(DataError::Kind::parse, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace emograph
