#include "emograph/metrics.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "emograph/error.hpp"

namespace emograph {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Metrics metrics_from_confusion(const std::vector<std::vector<std::size_t>>& confusion,
                               std::span<const std::string> labels) {
    const std::size_t c = labels.size();
    if (confusion.size() != c) throw DimensionError("metrics: confusion matrix size mismatch");
    for (const auto& row : confusion) {
        if (row.size() != c) throw DimensionError("metrics: confusion matrix must be square");
    }

    Metrics m;
    m.confusion = confusion;
    std::size_t correct = 0;
    double weighted_sum = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
        std::size_t tp = confusion[k][k];
        std::size_t gold = 0, predicted = 0;
        for (std::size_t j = 0; j < c; ++j) {
            gold += confusion[k][j];
            predicted += confusion[j][k];
        }
        ClassMetrics cm;
        cm.label = labels[k];
        cm.support = gold;
        cm.precision = predicted == 0 ? 0.0
                                      : static_cast<double>(tp) / static_cast<double>(predicted);
        cm.recall = gold == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold);
        cm.f1 = (cm.precision + cm.recall) == 0.0
                    ? 0.0
                    : 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
        weighted_sum += static_cast<double>(cm.support) * cm.f1;
        correct += tp;
        m.samples += gold;
        m.per_class.push_back(std::move(cm));
    }
    m.weighted_f1 = m.samples == 0 ? 0.0 : weighted_sum / static_cast<double>(m.samples);
    m.accuracy = m.samples == 0 ? 0.0
                                : static_cast<double>(correct) / static_cast<double>(m.samples);
    return m;
}

std::string metrics_to_json_string(const Metrics& m) {
    nlohmann::json j;
    j["weighted_f1"] = m.weighted_f1;
    j["accuracy"] = m.accuracy;
    j["samples"] = m.samples;
    j["per_class"] = nlohmann::json::array();
    for (const ClassMetrics& cm : m.per_class) {
        j["per_class"].push_back({{"label", cm.label},
                                  {"support", cm.support},
                                  {"precision", cm.precision},
                                  {"recall", cm.recall},
                                  {"f1", cm.f1}});
    }
    j["confusion"] = m.confusion;
    return j.dump(2);
}

void write_confusion_csv(const Metrics& m, std::ostream& out) {
    out << "gold_label";
    for (const ClassMetrics& cm : m.per_class) out << ",predicted:" << cm.label;
    out << '\n';
    for (std::size_t g = 0; g < m.confusion.size(); ++g) {
        out << m.per_class[g].label;
        for (const std::size_t count : m.confusion[g]) out << ',' << count;
        out << '\n';
    }
}

void write_per_class_csv(const Metrics& m, std::ostream& out) {
    out << "label,support,precision,recall,f1\n";
    for (const ClassMetrics& cm : m.per_class) {
        out << cm.label << ',' << cm.support << ',' << format_double(cm.precision) << ','
            << format_double(cm.recall) << ',' << format_double(cm.f1) << '\n';
    }
}

}  // namespace emograph
