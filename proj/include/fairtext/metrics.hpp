#ifndef FAIRTEXT_METRICS_HPP
#define FAIRTEXT_METRICS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairtext/model.hpp"
#include "fairtext/transform.hpp"

namespace fairtext {

struct MismatchCount {
    long mismatches = 0;
    long total_pairs = 0;
};

// A pair is mismatched when predict(original) != predict(canonical variant).
MismatchCount count_mismatches(const ClassifierParams& params, const Vocabulary& vocab,
                               std::span<const PairedSample> pairs,
                               bool parallel = true);

double bias_percentage(const MismatchCount& count);
double normalized_bias_score(const MismatchCount& approach,
                             const MismatchCount& baseline);
double normalized_bias_score_counts(long approach_mismatches,
                                    long baseline_mismatches);

struct EvalItem {
    const TokenSequence* tokens;
    int label;
};

// Fraction correct x 100.
double accuracy(const ClassifierParams& params, const Vocabulary& vocab,
                std::span<const EvalItem> items, bool parallel = true);
double accuracy_originals(const ClassifierParams& params, const Vocabulary& vocab,
                          std::span<const PairedSample> pairs, bool parallel = true);
double accuracy_variants(const ClassifierParams& params, const Vocabulary& vocab,
                         std::span<const PairedSample> pairs, bool parallel = true);

// Unrounded per-task inputs to the aggregation; rounding happens only at
// serialization (two decimals, half away from zero).
struct TaskResult {
    std::string task;
    long mismatches = 0;
    long total_pairs = 0;
    double accuracy_original = 0.0;
    double accuracy_swapped = 0.0;
    std::optional<long> baseline_mismatches;
};

struct TaskReport {
    std::string task;
    long mismatches = 0;
    long total_pairs = 0;
    double bias_percentage = 0.0;
    std::optional<double> normalized_bias_score;
    double accuracy_original = 0.0;
    double accuracy_swapped = 0.0;
    double accuracy_average = 0.0;
};

struct BiasReport {
    std::vector<TaskReport> tasks;
    double overall_average_accuracy = 0.0;
    std::optional<double> average_bias_score;
};

BiasReport aggregate_report(std::span<const TaskResult> tasks);

std::string report_to_csv(const BiasReport& report);
std::string report_to_markdown(const BiasReport& report);

}  // namespace fairtext

#endif
