#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace emograph {

struct ClassMetrics {
    std::string label;
    std::size_t support = 0;  // gold count
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct Metrics {
    std::vector<std::vector<std::size_t>> confusion;  // [gold][predicted]
    std::vector<ClassMetrics> per_class;
    double weighted_f1 = 0.0;  // per-class F1 weighted by support
    double accuracy = 0.0;
    std::size_t samples = 0;
};

// Per-class F1 = 2PR/(P+R), defined as 0 when P+R = 0 (a class never
// predicted and never gold-positive still contributes its zero weight).
Metrics metrics_from_confusion(const std::vector<std::vector<std::size_t>>& confusion,
                               std::span<const std::string> labels);

std::string metrics_to_json_string(const Metrics& m);

// gold_label,predicted:<label1>,...,<labelC> count rows.
void write_confusion_csv(const Metrics& m, std::ostream& out);
// label,support,precision,recall,f1 rows.
void write_per_class_csv(const Metrics& m, std::ostream& out);

// Fixed-format double for CSV output: round-trip exact, locale-free.
std::string format_double(double v);

}  // namespace emograph
