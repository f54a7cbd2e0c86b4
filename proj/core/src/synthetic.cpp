#include "emograph/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "emograph/error.hpp"
#include "emograph/rng.hpp"

namespace emograph {

using nlohmann::json;

SynthTask synth_task_from_string(const std::string& s) {
    if (s == "prototype") return SynthTask::prototype;
    if (s == "long_range") return SynthTask::long_range;
    throw ArgumentError("synthetic: unknown task '" + s + "'");
}

std::string to_string(SynthTask t) {
    return t == SynthTask::prototype ? "prototype" : "long_range";
}

void SynthSpec::validate() const {
    if (conversations == 0) throw ArgumentError("synthetic: need at least one conversation");
    if (classes < 2) throw ArgumentError("synthetic: need at least two classes");
    if (min_len == 0 || min_len > max_len) throw ArgumentError("synthetic: bad length range");
    if (dim_text == 0 || dim_visual == 0 || dim_acoustic == 0) {
        throw ArgumentError("synthetic: dimensions must be positive");
    }
    if (dim_text < classes || dim_visual < classes || dim_acoustic < classes) {
        throw ArgumentError("synthetic: each modality dimension must be >= the class count");
    }
    if (noise < 0.0) throw ArgumentError("synthetic: noise must be non-negative");
    if (!(separation > 0.0)) throw ArgumentError("synthetic: separation must be positive");
    if (task == SynthTask::long_range) {
        if (long_range_offset < 2) throw ArgumentError("synthetic: long_range_offset must be >= 2");
        if (min_len < 2 * long_range_offset) {
            throw ArgumentError(
                "synthetic: long-range conversations must have at least 2*offset utterances");
        }
    }
}

namespace {

std::string zero_pad(std::size_t value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%0*zu", width, value);
    return buf;
}

// Orthonormal class directions per modality: Gram-Schmidt on Gaussian
// draws. Requires dim >= classes, enforced by validate().
std::vector<Vector> class_directions(std::size_t classes, std::size_t dim, Rng& rng) {
    std::vector<Vector> dirs;
    while (dirs.size() < classes) {
        Vector v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = rng.normal();
        for (const Vector& u : dirs) {
            double dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i) dot += v[i] * u[i];
            for (std::size_t i = 0; i < dim; ++i) v[i] -= dot * u[i];
        }
        double norm2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) norm2 += v[i] * v[i];
        if (norm2 < 1e-12) continue;  // degenerate draw, resample
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < dim; ++i) v[i] *= inv;
        dirs.push_back(std::move(v));
    }
    return dirs;
}

Vector noisy_prototype(const Vector& direction, double separation, double noise, Rng& rng) {
    Vector x(direction.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = separation * direction[i] + noise * rng.normal();
    }
    return x;
}

}  // namespace

Dataset generate_synthetic(const SynthSpec& spec, std::uint64_t seed) {
    spec.validate();

    Dataset ds;
    ds.dim_text = spec.dim_text;
    ds.dim_visual = spec.dim_visual;
    ds.dim_acoustic = spec.dim_acoustic;
    const int label_width = spec.classes > 100 ? 3 : 2;
    for (std::size_t c = 0; c < spec.classes; ++c) {
        ds.labels.push_back("class_" + zero_pad(c, label_width));
    }

    Rng proto_rng = substream(seed, "synth.protos");
    const std::vector<Vector> dir_t = class_directions(spec.classes, spec.dim_text, proto_rng);
    const std::vector<Vector> dir_v = class_directions(spec.classes, spec.dim_visual, proto_rng);
    const std::vector<Vector> dir_a = class_directions(spec.classes, spec.dim_acoustic, proto_rng);

    for (std::size_t k = 0; k < spec.conversations; ++k) {
        Rng rng = substream(seed, "synth.conv", k);
        const std::size_t len =
            spec.min_len + static_cast<std::size_t>(rng.below(spec.max_len - spec.min_len + 1));

        std::vector<std::size_t> signal(len);
        for (std::size_t i = 0; i < len; ++i) {
            signal[i] = static_cast<std::size_t>(rng.below(spec.classes));
        }

        Conversation conv;
        conv.id = "c" + zero_pad(k, 3);
        for (std::size_t i = 0; i < len; ++i) {
            Utterance u;
            u.id = "u" + zero_pad(i, 2);
            u.speaker = "s" + std::to_string(i % 2);
            if (spec.task == SynthTask::prototype) {
                u.label = signal[i];
            } else if (i >= spec.long_range_offset) {
                u.label = signal[i - spec.long_range_offset];
            } else {
                // Head positions mirror the offset forward, so every label
                // is a fixed-delay function of the features in one
                // direction or the other.
                u.label = signal[i + spec.long_range_offset];
            }
            u.text = noisy_prototype(dir_t[signal[i]], spec.separation, spec.noise, rng);
            u.visual = noisy_prototype(dir_v[signal[i]], spec.separation, spec.noise, rng);
            u.acoustic = noisy_prototype(dir_a[signal[i]], spec.separation, spec.noise, rng);
            conv.utterances.push_back(std::move(u));
        }
        ds.conversations.push_back(std::move(conv));
    }
    return ds;
}

SynthSpec synth_spec_from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("synthetic spec: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("synthetic spec: must be a JSON object");

    static const std::set<std::string> known = {
        "task",       "conversations", "min_len",   "max_len",
        "classes",    "dim_t",         "dim_v",     "dim_a",
        "long_range_offset", "noise",  "separation"};
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) throw ConfigError("synthetic spec: unknown key '" + key + "'");
    }

    SynthSpec spec;
    if (j.contains("task")) spec.task = synth_task_from_string(j.at("task").get<std::string>());
    const auto take_size = [&j](const char* key, std::size_t& into) {
        if (j.contains(key)) {
            if (!j.at(key).is_number_unsigned()) {
                throw ConfigError(std::string("synthetic spec: '") + key +
                                  "' must be a non-negative integer");
            }
            into = j.at(key).get<std::size_t>();
        }
    };
    take_size("conversations", spec.conversations);
    take_size("min_len", spec.min_len);
    take_size("max_len", spec.max_len);
    take_size("classes", spec.classes);
    take_size("dim_t", spec.dim_text);
    take_size("dim_v", spec.dim_visual);
    take_size("dim_a", spec.dim_acoustic);
    take_size("long_range_offset", spec.long_range_offset);
    if (j.contains("noise")) spec.noise = j.at("noise").get<double>();
    if (j.contains("separation")) spec.separation = j.at("separation").get<double>();
    spec.validate();
    return spec;
}

std::string to_json_string(const SynthSpec& spec) {
    json j;
    j["task"] = to_string(spec.task);
    j["conversations"] = spec.conversations;
    j["min_len"] = spec.min_len;
    j["max_len"] = spec.max_len;
    j["classes"] = spec.classes;
    j["dim_t"] = spec.dim_text;
    j["dim_v"] = spec.dim_visual;
    j["dim_a"] = spec.dim_acoustic;
    j["long_range_offset"] = spec.long_range_offset;
    j["noise"] = spec.noise;
    j["separation"] = spec.separation;
    return j.dump(2);
}

}  // namespace emograph
