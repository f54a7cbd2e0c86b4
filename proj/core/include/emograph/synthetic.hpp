#pragma once

#include <cstdint>
#include <string>

#include "emograph/dataset.hpp"

namespace emograph {

enum class SynthTask { prototype, long_range };

SynthTask synth_task_from_string(const std::string& s);
std::string to_string(SynthTask t);

// Generator spec for the two desk-scale task families.
//
// prototype: each class has one unit-direction prototype per modality,
// scaled by `separation`; an utterance's features are its class prototype
// plus N(0, noise^2) noise, so labels are recoverable locally.
//
// long_range: features carry a class signal c_i the same way, but the
// label is the shifted signal y_i = c_{i - offset}; the first `offset`
// positions mirror the shift forward (y_i = c_{i + offset}). Labels are
// therefore a fixed-delay function of the features and independent of the
// local features.
struct SynthSpec {
    SynthTask task = SynthTask::prototype;
    std::size_t conversations = 40;
    std::size_t min_len = 8, max_len = 12;
    std::size_t classes = 3;
    std::size_t dim_text = 8, dim_visual = 8, dim_acoustic = 8;
    std::size_t long_range_offset = 4;  // >= 2, forces reliance on distant nodes
    double noise = 1.0;
    double separation = 3.0;

    void validate() const;
};

SynthSpec synth_spec_from_json_string(const std::string& text);
std::string to_json_string(const SynthSpec& spec);

// Pure function of (spec, seed).
Dataset generate_synthetic(const SynthSpec& spec, std::uint64_t seed);

}  // namespace emograph
