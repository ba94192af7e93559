// Acceptance harness: exercises the full toolkit against frozen reference
// values and end-to-end properties. Prints one PASS/FAIL line per criterion
// and exits nonzero if any fail.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fairtext/commands.hpp"
#include "fairtext/corpus.hpp"
#include "fairtext/lexicon.hpp"
#include "fairtext/metrics.hpp"
#include "fairtext/train.hpp"
#include "fairtext/transform.hpp"
#include "fairtext/util.hpp"

using namespace fairtext;

namespace {

const std::filesystem::path kDataDir = FAIRTEXT_DATA_DIR;
const std::filesystem::path kGoldenDir = FAIRTEXT_GOLDEN_DIR;

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

std::filesystem::path scratch(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("fairtext_accept_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Reference mismatch counts and pair totals for the four published tasks.
const std::vector<std::string> kTasks = {"sentiment", "sarcasm", "toxicity",
                                         "hate_speech"};
const std::vector<long> kTotals = {4857, 9589, 7057, 10034};
const std::vector<long> kBaseline = {218, 45, 528, 525};

Check criterion1_score_grid() {
    Check c;
    struct Row {
        const char* name;
        std::vector<long> counts;
        std::vector<double> cells;
        double average;
    };
    const std::vector<Row> grid = {
        {"baseline", {218, 45, 528, 525}, {100.00, 100.00, 100.00, 100.00}, 100.00},
        {"fod", {30, 5, 55, 243}, {13.76, 11.11, 10.42, 46.29}, 20.39},
        {"tm", {0, 0, 0, 0}, {0.00, 0.00, 0.00, 0.00}, 0.00},
        {"jlo", {8, 5, 50, 119}, {3.67, 11.11, 9.47, 22.67}, 11.73},
        {"foa", {18, 4, 25, 36}, {8.26, 8.89, 4.73, 6.86}, 7.18},
    };
    for (const auto& row : grid) {
        std::vector<TaskResult> tasks;
        for (std::size_t t = 0; t < 4; ++t) {
            TaskResult r;
            r.task = kTasks[t];
            r.mismatches = row.counts[t];
            r.total_pairs = kTotals[t];
            r.baseline_mismatches = kBaseline[t];
            tasks.push_back(r);
        }
        auto report = aggregate_report(tasks);
        for (std::size_t t = 0; t < 4; ++t) {
            double got = round2(*report.tasks[t].normalized_bias_score);
            c.expect(std::abs(got - row.cells[t]) < 0.005,
                     std::string(row.name) + "/" + kTasks[t] + " score " +
                         format2(got));
        }
        double avg = round2(*report.average_bias_score);
        c.expect(std::abs(avg - row.average) < 0.005,
                 std::string(row.name) + " average " + format2(avg));
    }
    return c;
}

Check criterion2_bias_percentage() {
    Check c;
    c.expect(format2(bias_percentage({528, 7057})) == "7.48", "toxicity cell");
    c.expect(format2(bias_percentage({525, 10034})) == "5.23", "hate speech cell");
    // These two reference figures were published truncated (4.48, 0.46); with
    // the uniform half-away-from-zero rule they display one hundredth higher,
    // and the unrounded values stay within +-0.01 of the published ones.
    c.expect(std::abs(bias_percentage({218, 4857}) - 4.48) < 0.01, "sentiment cell");
    c.expect(std::abs(bias_percentage({45, 9589}) - 0.46) < 0.01, "sarcasm cell");
    c.expect(format2(bias_percentage({218, 4857})) == "4.49",
             "sentiment standardized display");
    c.expect(format2(bias_percentage({45, 9589})) == "0.47",
             "sarcasm standardized display");
    return c;
}

Check criterion3_accuracy_aggregation() {
    Check c;
    auto aggregate = [](const std::vector<double>& orig,
                        const std::vector<double>& swapped) {
        std::vector<TaskResult> tasks;
        for (std::size_t t = 0; t < orig.size(); ++t) {
            TaskResult r;
            r.task = "t" + std::to_string(t);
            r.mismatches = 1;
            r.total_pairs = 100;
            r.accuracy_original = orig[t];
            r.accuracy_swapped = swapped[t];
            tasks.push_back(r);
        }
        return aggregate_report(tasks);
    };

    auto untrained = aggregate({27.06, 64.40, 62.10, 83.23},
                               {45.87, 35.50, 37.80, 16.76});
    const std::vector<double> task_avgs = {36.47, 49.95, 49.95, 50.00};
    for (std::size_t t = 0; t < 4; ++t) {
        c.expect(std::abs(round2(untrained.tasks[t].accuracy_average) -
                          task_avgs[t]) < 0.005,
                 "untrained task " + std::to_string(t) + " average");
    }
    c.expect(std::abs(untrained.overall_average_accuracy - 46.59) < 0.01,
             "untrained overall " + format2(untrained.overall_average_accuracy));

    auto joint = aggregate({87.15, 84.44, 88.25, 78.28},
                           {84.40, 73.33, 82.95, 63.61});
    c.expect(std::abs(joint.overall_average_accuracy - 80.30) < 0.01,
             "joint overall " + format2(joint.overall_average_accuracy));
    return c;
}

Check criterion4_gradients() {
    Check c;
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> classes_dist(2, 3);
    std::uniform_int_distribution<int> len_dist(2, 6);
    std::uniform_int_distribution<int> tok_dist(0, 9);
    const double lambdas[] = {0.0, 0.5, 1.0};

    std::vector<TokenSequence> base;
    std::vector<std::string> pool;
    for (int i = 0; i < 10; ++i) pool.push_back("tok" + std::to_string(i));
    base.push_back(TokenSequence(pool.begin(), pool.end()));

    int checked = 0, flagged = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 300 && checked < 100; ++trial) {
        auto vocab = Vocabulary::build(base, 1);
        auto params = ClassifierParams::init(vocab.size(), 8, classes_dist(rng),
                                             0.0, 5000 + trial);
        auto draw = [&] {
            TokenSequence t;
            int len = len_dist(rng);
            for (int i = 0; i < len; ++i) t.push_back(pool[tok_dist(rng)]);
            return t;
        };
        TokenSequence original = draw(), swapped = draw();
        int label = trial % params.num_classes;
        double lambda = lambdas[trial % 3];

        auto result = finite_difference_check(original, &swapped, label, params,
                                              vocab, nullptr, lambda, 1e-5);
        if (result.tie_flagged) {
            ++flagged;
            continue;
        }
        worst = std::max(worst, result.max_rel_error);
        ++checked;
    }
    c.expect(checked >= 100, "only " + std::to_string(checked) + " instances");
    c.expect(worst < 1e-4, "max relative error " + std::to_string(worst));
    return c;
}

Check criterion5_loss_identities() {
    Check c;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Vec e(8), other(8);
        for (auto& x : e) x = dist(rng);
        for (auto& x : other) x = dist(rng);
        Vec neg = e;
        for (auto& x : neg) x = -x;

        c.expect(std::abs(gender_debias_loss(e, e)) < 1e-12, "L(e,e)=0");
        c.expect(std::abs(gender_debias_loss(e, neg) - 2.0) < 1e-12, "L(e,-e)=2");
        double base = gender_debias_loss(e, other);
        for (double scale : {1e-6, 0.25, 7.0, 1e6}) {
            Vec scaled = other;
            for (auto& x : scaled) x *= scale;
            c.expect(std::abs(gender_debias_loss(e, scaled) - base) < 1e-12,
                     "scaling invariance");
        }
    }
    Vec logits{0.4, -1.2, 0.7};
    Vec e1{1.0, 0.5}, e2{-0.3, 0.9};
    auto at_zero = joint_loss(logits, 1, e1, e2, 0.0);
    c.expect(at_zero.joint == at_zero.ce, "J(lambda=0) == CE exactly");
    c.expect(std::abs(cross_entropy({0.0, 0.0}, 0) - std::log(2.0)) < 1e-12,
             "CE of uniform 2-class logits == ln 2");
    return c;
}

// Synthetic gendered 2-class corpus with an injected label-gender correlation.
std::vector<LabeledSample> synthetic_corpus(std::uint64_t seed, int n,
                                            const NameGazetteer& gazetteer) {
    const std::vector<std::string> male_terms = {"dada", "kaka", "baba", "mama",
                                                 "nana"};
    const std::vector<std::string> female_terms = {"ma", "khala", "emey", "dadii",
                                                   "nanii"};
    const std::vector<std::string> fillers = {"ekhaen", "oenk", "kaj", "Hy",
                                              "taraa", "saraidn", "basay", "gan"};
    const std::vector<std::string> good = {"bhalo", "chmtkar", "darun"};
    const std::vector<std::string> bad = {"kharap", "bieshri", "jghnY"};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> term_pick(0, 4);
    std::uniform_int_distribution<std::size_t> content_pick(0, good.size() - 1);
    std::uniform_int_distribution<std::size_t> filler_pick(0, fillers.size() - 1);

    std::vector<LabeledSample> corpus;
    for (int i = 0; i < n; ++i) {
        int label = i % 2;
        // The gendered term tracks the label perfectly, so a classifier fit on
        // the originals alone has every reason to lean on it.
        bool male_side = label == 1;
        const auto& terms = male_side ? male_terms : female_terms;
        std::string term = terms[term_pick(rng)];
        // Two independent content tokens carry the legitimate signal.
        auto content = [&] {
            const auto& pool = (coin(rng) < 0.9) == (label == 1) ? good : bad;
            return pool[content_pick(rng)];
        };

        std::ostringstream text;
        if (coin(rng) < 0.3) {
            const auto& names =
                gazetteer.names(male_side ? Gender::male : Gender::female);
            text << names[i % names.size()] << ' ';
        }
        text << term << ' ' << content() << ' ' << content() << ' '
             << fillers[filler_pick(rng)];
        corpus.push_back({std::to_string(i), text.str(), label});
    }
    return corpus;
}

struct StrategyOutcome {
    long mismatches = 0;
    double avg_accuracy = 0.0;
};

StrategyOutcome run_strategy(Strategy strategy, std::span<const PairedSample> pairs,
                             const GenderedLexicon& lexicon,
                             const NameGazetteer& gazetteer,
                             const NameDetector& detector) {
    std::vector<TokenSequence> vocab_corpus;
    for (const auto& p : pairs) {
        vocab_corpus.push_back(p.original);
        for (const auto& v : p.variants) vocab_corpus.push_back(v);
    }
    auto vocab = Vocabulary::build(vocab_corpus, 1);
    auto params = ClassifierParams::init(vocab.size(), 32, 2, 0.2, 42);

    MitigationConfig config;
    config.strategy = strategy;
    MaskingContext masking{&lexicon, &gazetteer, &detector};
    train(pairs, config, params, vocab,
          strategy == Strategy::tm ? &masking : nullptr);

    std::vector<PairedSample> eval_pairs(pairs.begin(), pairs.end());
    if (strategy == Strategy::tm) {
        for (auto& p : eval_pairs) {
            p.original = mask_tokens(p.original, lexicon, gazetteer, detector);
            for (auto& v : p.variants) {
                v = mask_tokens(v, lexicon, gazetteer, detector);
            }
        }
    }
    StrategyOutcome outcome;
    outcome.mismatches = count_mismatches(params, vocab, eval_pairs).mismatches;
    outcome.avg_accuracy = (accuracy_originals(params, vocab, eval_pairs) +
                            accuracy_variants(params, vocab, eval_pairs)) /
                           2.0;
    return outcome;
}

Check criterion6_masking_zero_bias() {
    Check c;
    auto lexicon = GenderedLexicon::load(kDataDir / "lexicon.tsv");
    auto gazetteer = NameGazetteer::load(kDataDir / "names.tsv");
    GazetteerNameDetector detector(gazetteer);

    auto corpus = synthetic_corpus(42, 120, gazetteer);
    auto pairs = build_paired_dataset(corpus, lexicon, gazetteer, detector);
    c.expect(!pairs.empty(), "paired corpus is empty");

    for (const auto& p : pairs) {
        auto masked = mask_tokens(p.original, lexicon, gazetteer, detector);
        for (const auto& v : p.variants) {
            if (mask_tokens(v, lexicon, gazetteer, detector) != masked) {
                c.expect(false, "masking identity broken for pair " + p.pair_id);
                break;
            }
        }
    }

    auto outcome = run_strategy(Strategy::tm, pairs, lexicon, gazetteer, detector);
    c.expect(outcome.mismatches == 0,
             "masked evaluation saw " + std::to_string(outcome.mismatches) +
                 " mismatches");
    return c;
}

Check criterion7_strategy_ordering() {
    Check c;
    auto lexicon = GenderedLexicon::load(kDataDir / "lexicon.tsv");
    auto gazetteer = NameGazetteer::load(kDataDir / "names.tsv");
    GazetteerNameDetector detector(gazetteer);

    int held = 0;
    const std::uint64_t seeds[] = {42, 43, 44, 45, 46};
    for (std::uint64_t seed : seeds) {
        auto corpus = synthetic_corpus(seed, 800, gazetteer);
        auto pairs = build_paired_dataset(corpus, lexicon, gazetteer, detector);

        auto zero = run_strategy(Strategy::zero_shot, pairs, lexicon, gazetteer,
                                 detector);
        auto fod = run_strategy(Strategy::fod, pairs, lexicon, gazetteer, detector);
        auto foa = run_strategy(Strategy::foa, pairs, lexicon, gazetteer, detector);
        auto jlo = run_strategy(Strategy::jlo, pairs, lexicon, gazetteer, detector);

        bool a = jlo.mismatches < fod.mismatches;
        bool b = jlo.avg_accuracy >= foa.avg_accuracy - 5.0;
        bool cc = foa.mismatches < zero.mismatches;
        if (a && b && cc) {
            ++held;
        } else {
            std::ostringstream why;
            why << "seed " << seed << ": zero=" << zero.mismatches
                << " fod=" << fod.mismatches << " foa=" << foa.mismatches
                << " jlo=" << jlo.mismatches << " jlo_acc=" << jlo.avg_accuracy
                << " foa_acc=" << foa.avg_accuracy;
            std::cerr << "  note: " << why.str() << '\n';
        }
    }
    c.expect(held >= 4,
             "ordering held in only " + std::to_string(held) + "/5 seeds");
    return c;
}

Check criterion8_pipeline_goldens() {
    Check c;
    auto lexicon = GenderedLexicon::load(kDataDir / "lexicon.tsv");

    // Multi-counterpart expansion of one sentence into three variants.
    auto expansion = read_lines(kGoldenDir / "dada_expansion.txt");
    c.expect(expansion.size() == 4, "expansion golden must have 4 lines");
    if (expansion.size() == 4) {
        auto tokens = tokenize(expansion[0]);
        c.expect(join_tokens(tokens) == expansion[0], "original round-trip");
        auto variants = swap_gender_terms(tokens, lexicon, 16);
        c.expect(variants.size() == 3, "expected 3 variants");
        for (std::size_t v = 0; v < variants.size() && v + 1 < expansion.size();
             ++v) {
            c.expect(join_tokens(variants[v].tokens) == expansion[v + 1],
                     "variant " + std::to_string(v) + " mismatch");
        }
    }

    // Four-stage walkthrough: swap terms, detect the name, replace it.
    auto stages = read_lines(kGoldenDir / "walkthrough.txt");
    auto gazetteer = NameGazetteer::load(kGoldenDir / "walkthrough_names.tsv");
    c.expect(stages.size() == 4, "walkthrough golden must have 4 lines");
    if (stages.size() == 4) {
        auto tokens = tokenize(stages[0]);
        auto variants = swap_gender_terms(tokens, lexicon, 16);
        c.expect(!variants.empty(), "no swapped variant");
        if (!variants.empty()) {
            c.expect(join_tokens(variants[0].tokens) == stages[1],
                     "gender-swap stage mismatch");

            auto hits = detect_names_gazetteer(variants[0].tokens, gazetteer);
            std::ostringstream detected;
            for (std::size_t i = 0; i < hits.size(); ++i) {
                if (i) detected << ' ';
                detected << hits[i].index << ' ' << gender_name(*hits[i].gender);
            }
            c.expect(detected.str() == stages[2], "name-detection stage mismatch");

            auto replaced =
                replace_names(variants[0].tokens, hits, gazetteer, Gender::male, "0");
            c.expect(join_tokens(replaced) == stages[3],
                     "name-replacement stage mismatch");
        }
    }
    return c;
}

Check criterion9_determinism() {
    Check c;
    auto gazetteer = NameGazetteer::load(kDataDir / "names.tsv");
    auto corpus = synthetic_corpus(11, 60, gazetteer);

    auto root = scratch("determinism");
    write_corpus_jsonl(root / "corpus.jsonl", corpus);

    std::ostringstream out, err;
    auto run = [&](const std::filesystem::path& dir) {
        cli::TransformOptions transform;
        transform.input = root / "corpus.jsonl";
        transform.lexicon = kDataDir / "lexicon.tsv";
        transform.gazetteer = kDataDir / "names.tsv";
        transform.out_dir = dir / "pairs";
        if (cmd_transform(transform, out, err) != 0) return false;

        cli::TrainOptions train_options;
        train_options.pairs = dir / "pairs" / "pairs.jsonl";
        train_options.out_dir = dir / "model";
        train_options.strategy = "jlo";
        if (cmd_train(train_options, out, err) != 0) return false;

        cli::EvaluateOptions evaluate;
        evaluate.checkpoint = dir / "model" / "checkpoint.json";
        evaluate.pairs = dir / "pairs" / "pairs.jsonl";
        evaluate.out_dir = dir / "eval";
        evaluate.task = "synthetic";
        evaluate.strategy = "jlo";
        return cmd_evaluate(evaluate, out, err) == 0;
    };

    bool ok1 = run(root / "a");
    bool ok2 = run(root / "b");
    c.expect(ok1 && ok2, "pipeline run failed: " + err.str());
    if (ok1 && ok2) {
        for (const char* rel :
             {"pairs/pairs.jsonl", "model/checkpoint.json", "model/loss.csv",
              "eval/report.csv", "eval/report.md", "eval/report.json"}) {
            c.expect(slurp(root / "a" / rel) == slurp(root / "b" / rel),
                     std::string(rel) + " differs between runs");
        }
    }
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        Check (*run)();
    };
    const std::vector<Criterion> criteria = {
        {"published bias-score grid reproduced from mismatch counts",
         criterion1_score_grid},
        {"bias percentage reference cells", criterion2_bias_percentage},
        {"accuracy aggregation reference averages", criterion3_accuracy_aggregation},
        {"analytic gradients vs finite differences", criterion4_gradients},
        {"loss identities", criterion5_loss_identities},
        {"masking identity gives zero measured bias", criterion6_masking_zero_bias},
        {"strategy ordering on a synthetic biased corpus",
         criterion7_strategy_ordering},
        {"pipeline golden transcripts", criterion8_pipeline_goldens},
        {"end-to-end determinism", criterion9_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check result;
        try {
            result = criteria[i].run();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        std::cout << "criterion " << (i + 1) << " (" << criteria[i].label
                  << "): " << (result.ok ? "PASS" : "FAIL");
        if (!result.ok) {
            std::cout << " — " << result.detail;
            ++failures;
        }
        std::cout << '\n';
    }
    return failures == 0 ? 0 : 1;
}
