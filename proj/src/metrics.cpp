#include "fairtext/metrics.hpp"

#include <sstream>

#include "fairtext/errors.hpp"
#include "fairtext/util.hpp"

namespace fairtext {

MismatchCount count_mismatches(const ClassifierParams& params, const Vocabulary& vocab,
                               std::span<const PairedSample> pairs, bool parallel) {
    if (pairs.empty()) throw ValidationError("paired corpus is empty");
    long mismatches = 0;
    const long n = static_cast<long>(pairs.size());
    // Integer reduction; order-independent, so the parallel path is
    // deterministic.
#pragma omp parallel for reduction(+ : mismatches) if (parallel)
    for (long i = 0; i < n; ++i) {
        const PairedSample& p = pairs[i];
        int orig = predict(p.original, params, vocab);
        int swapped = predict(p.variants[p.canonical_variant], params, vocab);
        if (orig != swapped) ++mismatches;
    }
    return {mismatches, n};
}

double bias_percentage(const MismatchCount& count) {
    if (count.total_pairs <= 0) {
        throw ValidationError("bias percentage needs a non-empty pair set");
    }
    return 100.0 * static_cast<double>(count.mismatches) /
           static_cast<double>(count.total_pairs);
}

double normalized_bias_score_counts(long approach_mismatches,
                                    long baseline_mismatches) {
    if (baseline_mismatches <= 0) {
        throw ValidationError(
            "normalized bias score is undefined for a zero-mismatch baseline");
    }
    return 100.0 * static_cast<double>(approach_mismatches) /
           static_cast<double>(baseline_mismatches);
}

double normalized_bias_score(const MismatchCount& approach,
                             const MismatchCount& baseline) {
    return normalized_bias_score_counts(approach.mismatches, baseline.mismatches);
}

double accuracy(const ClassifierParams& params, const Vocabulary& vocab,
                std::span<const EvalItem> items, bool parallel) {
    if (items.empty()) throw ValidationError("accuracy needs a non-empty sample set");
    long correct = 0;
    const long n = static_cast<long>(items.size());
#pragma omp parallel for reduction(+ : correct) if (parallel)
    for (long i = 0; i < n; ++i) {
        if (predict(*items[i].tokens, params, vocab) == items[i].label) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(n);
}

double accuracy_originals(const ClassifierParams& params, const Vocabulary& vocab,
                          std::span<const PairedSample> pairs, bool parallel) {
    std::vector<EvalItem> items;
    items.reserve(pairs.size());
    for (const auto& p : pairs) items.push_back({&p.original, p.label});
    return accuracy(params, vocab, items, parallel);
}

double accuracy_variants(const ClassifierParams& params, const Vocabulary& vocab,
                         std::span<const PairedSample> pairs, bool parallel) {
    std::vector<EvalItem> items;
    items.reserve(pairs.size());
    for (const auto& p : pairs) {
        items.push_back({&p.variants[p.canonical_variant], p.label});
    }
    return accuracy(params, vocab, items, parallel);
}

BiasReport aggregate_report(std::span<const TaskResult> tasks) {
    if (tasks.empty()) throw ValidationError("report needs at least one task");
    BiasReport report;
    double acc_sum = 0.0;
    double nbs_sum = 0.0;
    bool all_have_baseline = true;
    for (const auto& t : tasks) {
        TaskReport r;
        r.task = t.task;
        r.mismatches = t.mismatches;
        r.total_pairs = t.total_pairs;
        r.bias_percentage = bias_percentage({t.mismatches, t.total_pairs});
        r.accuracy_original = t.accuracy_original;
        r.accuracy_swapped = t.accuracy_swapped;
        r.accuracy_average = (t.accuracy_original + t.accuracy_swapped) / 2.0;
        if (t.baseline_mismatches) {
            r.normalized_bias_score =
                normalized_bias_score_counts(t.mismatches, *t.baseline_mismatches);
            nbs_sum += *r.normalized_bias_score;
        } else {
            all_have_baseline = false;
        }
        acc_sum += r.accuracy_average;
        report.tasks.push_back(std::move(r));
    }
    // Aggregates from unrounded per-task values.
    report.overall_average_accuracy = acc_sum / static_cast<double>(tasks.size());
    if (all_have_baseline) {
        report.average_bias_score = nbs_sum / static_cast<double>(tasks.size());
    }
    return report;
}

std::string report_to_csv(const BiasReport& report) {
    std::ostringstream out;
    out << "task,pairs,mismatches,bias_percentage,normalized_bias_score,"
           "accuracy_original,accuracy_swapped,accuracy_average\n";
    for (const auto& t : report.tasks) {
        out << t.task << ',' << t.total_pairs << ',' << t.mismatches << ','
            << format2(t.bias_percentage) << ',';
        if (t.normalized_bias_score) out << format2(*t.normalized_bias_score);
        out << ',' << format2(t.accuracy_original) << ','
            << format2(t.accuracy_swapped) << ',' << format2(t.accuracy_average)
            << '\n';
    }
    out << "overall,,,,";
    if (report.average_bias_score) out << format2(*report.average_bias_score);
    out << ",,," << format2(report.overall_average_accuracy) << '\n';
    return out.str();
}

std::string report_to_markdown(const BiasReport& report) {
    std::ostringstream out;
    out << "| Task | Pairs | Mismatches | Bias% | Bias Score | Acc (orig) | "
           "Acc (swapped) | Acc (avg) |\n";
    out << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& t : report.tasks) {
        out << "| " << t.task << " | " << t.total_pairs << " | " << t.mismatches
            << " | " << format2(t.bias_percentage) << " | ";
        out << (t.normalized_bias_score ? format2(*t.normalized_bias_score) : "-");
        out << " | " << format2(t.accuracy_original) << " | "
            << format2(t.accuracy_swapped) << " | " << format2(t.accuracy_average)
            << " |\n";
    }
    out << "| **Average** | | | | ";
    out << (report.average_bias_score ? format2(*report.average_bias_score) : "-");
    out << " | | | " << format2(report.overall_average_accuracy) << " |\n";
    return out.str();
}

}  // namespace fairtext
