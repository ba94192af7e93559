#include "fairtext/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fairtext/corpus.hpp"
#include "fairtext/errors.hpp"
#include "fairtext/manifest.hpp"
#include "fairtext/metrics.hpp"
#include "fairtext/train.hpp"
#include "fairtext/util.hpp"

namespace fairtext::cli {

using nlohmann::json;

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv(kDataDirEnv)) return env;
    return "data";
}

std::filesystem::path default_lexicon_path() {
    return default_data_dir() / "lexicon.tsv";
}

std::filesystem::path default_gazetteer_path() {
    return default_data_dir() / "names.tsv";
}

namespace {

int classify_error(const std::exception& e, std::ostream& err) {
    err << "error: " << e.what() << '\n';
    if (dynamic_cast<const IoError*>(&e)) return kExitIoError;
    return kExitDomainError;
}

std::string full_precision(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

void ensure_out_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());
}

}  // namespace

int cmd_validate(const std::filesystem::path& lexicon_path,
                 const std::filesystem::path& gazetteer_path, std::ostream& out,
                 std::ostream& err) {
    try {
        GenderedLexicon lexicon = GenderedLexicon::load(lexicon_path);
        NameGazetteer gazetteer = NameGazetteer::load(gazetteer_path);
        ValidationReport report = lexicon.validate();

        out << "lexicon: " << lexicon.term_count() << " terms\n";
        out << "gazetteer: " << gazetteer.names(Gender::male).size() << " male, "
            << gazetteer.names(Gender::female).size() << " female names\n";
        out << "counterpart-only phrases: " << report.counterpart_only.size() << '\n';
        out << "asymmetric pairs: " << report.asymmetric.size() << '\n';
        out << "gender-tag conflicts: " << report.gender_conflicts.size() << '\n';
        for (const auto& [term, counterpart] : report.gender_conflicts) {
            out << "  conflict: " << term << " -> " << counterpart << '\n';
        }
        if (report.clean()) out << "lexicon is fully symmetric\n";
        return kExitOk;
    } catch (const std::exception& e) {
        return classify_error(e, err);
    }
}

int cmd_transform(const TransformOptions& options, std::ostream& out,
                  std::ostream& err) {
    try {
        auto corpus = read_corpus_jsonl(options.input);
        GenderedLexicon lexicon = GenderedLexicon::load(options.lexicon);
        NameGazetteer gazetteer = NameGazetteer::load(options.gazetteer);
        GazetteerNameDetector detector(gazetteer);

        auto pairs =
            build_paired_dataset(corpus, lexicon, gazetteer, detector, options.cap);
        ensure_out_dir(options.out_dir);
        write_paired_jsonl(options.out_dir / "pairs.jsonl", pairs);

        std::size_t variants = 0;
        for (const auto& p : pairs) variants += p.variants.size();
        out << "samples read: " << corpus.size() << '\n';
        out << "gendered samples kept: " << pairs.size() << '\n';
        out << "variants emitted: " << variants << '\n';
        if (pairs.empty()) {
            err << "warning: no gendered samples found; output is empty\n";
        }

        RunManifest manifest;
        manifest.command = "transform";
        manifest.config = json{{"cap", options.cap}};
        manifest.toolkit_version = kToolkitVersion;
        manifest.add_input(options.input);
        manifest.add_input(options.lexicon);
        manifest.add_input(options.gazetteer);
        manifest.output_files["pairs.jsonl"] = "paired corpus";
        manifest.write(options.out_dir);
        return kExitOk;
    } catch (const std::exception& e) {
        return classify_error(e, err);
    }
}

int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err) {
    try {
        auto strategy = parse_strategy(options.strategy);
        if (!strategy) {
            throw ConfigError("unknown strategy '" + options.strategy +
                              "' (expected zero_shot|fod|foa|tm|jlo)");
        }
        auto pairs = read_paired_jsonl(options.pairs);
        if (pairs.empty()) throw ValidationError("paired corpus is empty");

        std::vector<TokenSequence> vocab_corpus;
        int max_label = 0;
        for (const auto& p : pairs) {
            vocab_corpus.push_back(p.original);
            for (const auto& v : p.variants) vocab_corpus.push_back(v);
            max_label = std::max(max_label, p.label);
        }
        Vocabulary vocab = Vocabulary::build(vocab_corpus, options.min_freq);
        int num_classes = std::max(2, max_label + 1);

        ClassifierParams params =
            ClassifierParams::init(vocab.size(), options.embed_dim, num_classes,
                                   options.dropout, options.seed);

        MitigationConfig config;
        config.strategy = *strategy;
        config.lambda = options.lambda;
        config.batch_size = options.batch_size;
        config.learning_rate = options.learning_rate;
        config.epochs = options.epochs;
        config.dropout_rate = options.dropout;
        config.seed = options.seed;
        config.parallel = options.parallel;

        std::optional<GenderedLexicon> lexicon;
        std::optional<NameGazetteer> gazetteer;
        std::optional<GazetteerNameDetector> detector;
        MaskingContext masking;
        const MaskingContext* masking_ptr = nullptr;
        if (*strategy == Strategy::tm) {
            lexicon.emplace(GenderedLexicon::load(options.lexicon));
            gazetteer.emplace(NameGazetteer::load(options.gazetteer));
            detector.emplace(*gazetteer);
            masking = {&*lexicon, &*gazetteer, &*detector};
            masking_ptr = &masking;
        }

        TrainResult result = train(pairs, config, params, vocab, masking_ptr);

        ensure_out_dir(options.out_dir);
        save_checkpoint(options.out_dir / "checkpoint.json", params, vocab);

        std::ostringstream loss_csv;
        loss_csv << "epoch,ce,gb,joint\n";
        for (std::size_t e = 0; e < result.epoch_log.size(); ++e) {
            const auto& l = result.epoch_log[e];
            loss_csv << (e + 1) << ',' << full_precision(l.ce) << ','
                     << full_precision(l.gb) << ',' << full_precision(l.joint)
                     << '\n';
        }
        write_text_file(options.out_dir / "loss.csv", loss_csv.str());

        out << "strategy: " << strategy_name(*strategy) << '\n';
        out << "epochs logged: " << result.epoch_log.size() << '\n';

        RunManifest manifest;
        manifest.command = "train";
        manifest.config = json{{"strategy", strategy_name(*strategy)},
                               {"lambda", options.lambda},
                               {"epochs", options.epochs},
                               {"batch_size", options.batch_size},
                               {"learning_rate", options.learning_rate},
                               {"dropout", options.dropout},
                               {"embed_dim", options.embed_dim},
                               {"min_freq", options.min_freq},
                               {"parallel", options.parallel}};
        manifest.seed = options.seed;
        manifest.toolkit_version = kToolkitVersion;
        manifest.add_input(options.pairs);
        if (*strategy == Strategy::tm) {
            manifest.add_input(options.lexicon);
            manifest.add_input(options.gazetteer);
        }
        manifest.output_files["checkpoint.json"] = "model checkpoint";
        manifest.output_files["loss.csv"] = "per-epoch loss log";
        manifest.write(options.out_dir);
        return kExitOk;
    } catch (const std::exception& e) {
        return classify_error(e, err);
    }
}

int cmd_evaluate(const EvaluateOptions& options, std::ostream& out,
                 std::ostream& err) {
    try {
        auto [params, vocab] = load_checkpoint(options.checkpoint);
        auto pairs = read_paired_jsonl(options.pairs);
        if (pairs.empty()) throw ValidationError("paired corpus is empty");

        if (options.mask) {
            GenderedLexicon lexicon = GenderedLexicon::load(options.lexicon);
            NameGazetteer gazetteer = NameGazetteer::load(options.gazetteer);
            GazetteerNameDetector detector(gazetteer);
            for (auto& p : pairs) {
                p.original = mask_tokens(p.original, lexicon, gazetteer, detector);
                for (auto& v : p.variants) {
                    v = mask_tokens(v, lexicon, gazetteer, detector);
                }
            }
        }

        if (options.baseline_mismatches && *options.baseline_mismatches <= 0) {
            throw ValidationError(
                "normalized bias score is undefined: the zero-shot baseline has no "
                "mismatches to normalize against");
        }

        MismatchCount count = count_mismatches(params, vocab, pairs);
        TaskResult task;
        task.task = options.task;
        task.mismatches = count.mismatches;
        task.total_pairs = count.total_pairs;
        task.accuracy_original = accuracy_originals(params, vocab, pairs);
        task.accuracy_swapped = accuracy_variants(params, vocab, pairs);
        task.baseline_mismatches = options.baseline_mismatches;

        BiasReport report = aggregate_report(std::span(&task, 1));
        ensure_out_dir(options.out_dir);
        write_text_file(options.out_dir / "report.csv", report_to_csv(report));
        write_text_file(options.out_dir / "report.md", report_to_markdown(report));

        const TaskReport& t = report.tasks[0];
        json machine{{"strategy", options.strategy},
                     {"task", t.task},
                     {"total_pairs", t.total_pairs},
                     {"mismatches", t.mismatches},
                     {"bias_percentage", t.bias_percentage},
                     {"accuracy_original", t.accuracy_original},
                     {"accuracy_swapped", t.accuracy_swapped},
                     {"accuracy_average", t.accuracy_average}};
        if (t.normalized_bias_score) {
            machine["normalized_bias_score"] = *t.normalized_bias_score;
        }
        write_text_file(options.out_dir / "report.json", machine.dump(2) + "\n");

        out << report_to_markdown(report);

        RunManifest manifest;
        manifest.command = "evaluate";
        manifest.config = json{{"task", options.task},
                               {"strategy", options.strategy},
                               {"mask", options.mask}};
        if (options.baseline_mismatches) {
            manifest.config["baseline_mismatches"] = *options.baseline_mismatches;
        }
        manifest.toolkit_version = kToolkitVersion;
        manifest.add_input(options.checkpoint);
        manifest.add_input(options.pairs);
        manifest.output_files["report.csv"] = "bias report (machine)";
        manifest.output_files["report.md"] = "bias report (human)";
        manifest.output_files["report.json"] = "bias report (merge format)";
        manifest.write(options.out_dir);
        return kExitOk;
    } catch (const std::exception& e) {
        return classify_error(e, err);
    }
}

int cmd_report(const std::vector<std::filesystem::path>& run_dirs,
               const std::filesystem::path& out_dir, std::ostream& out,
               std::ostream& err) {
    try {
        struct Row {
            std::string strategy, task;
            json data;
        };
        std::vector<Row> rows;
        std::vector<std::string> strategies, tasks;
        for (const auto& dir : run_dirs) {
            json j = json::parse(read_text_file(dir / "report.json"), nullptr, false);
            if (j.is_discarded() || !j.is_object()) {
                throw ParseError("malformed report.json in " + dir.string());
            }
            Row row{j.value("strategy", ""), j.value("task", ""), j};
            if (row.strategy.empty()) row.strategy = "(unlabeled)";
            for (const auto& other : rows) {
                if (other.strategy == row.strategy && other.task == row.task) {
                    throw ValidationError("conflicting runs for strategy '" +
                                          row.strategy + "', task '" + row.task + "'");
                }
            }
            if (std::find(strategies.begin(), strategies.end(), row.strategy) ==
                strategies.end()) {
                strategies.push_back(row.strategy);
            }
            if (std::find(tasks.begin(), tasks.end(), row.task) == tasks.end()) {
                tasks.push_back(row.task);
            }
            rows.push_back(std::move(row));
        }
        if (rows.empty()) throw ValidationError("no run directories given");

        auto cell = [&](const std::string& strategy,
                        const std::string& task) -> const json* {
            for (const auto& r : rows) {
                if (r.strategy == strategy && r.task == task) return &r.data;
            }
            return nullptr;
        };

        std::ostringstream csv, md;
        csv << "strategy,task,total_pairs,mismatches,bias_percentage,"
               "normalized_bias_score,accuracy_original,accuracy_swapped,"
               "accuracy_average\n";
        for (const auto& r : rows) {
            csv << r.strategy << ',' << r.task << ','
                << r.data.value("total_pairs", 0L) << ','
                << r.data.value("mismatches", 0L) << ','
                << format2(r.data.value("bias_percentage", 0.0)) << ',';
            if (r.data.contains("normalized_bias_score")) {
                csv << format2(r.data["normalized_bias_score"].get<double>());
            }
            csv << ',' << format2(r.data.value("accuracy_original", 0.0)) << ','
                << format2(r.data.value("accuracy_swapped", 0.0)) << ','
                << format2(r.data.value("accuracy_average", 0.0)) << '\n';
        }

        md << "## Bias scores\n\n| Approach |";
        for (const auto& t : tasks) md << ' ' << t << " |";
        md << " Average |\n|---|";
        for (std::size_t i = 0; i < tasks.size() + 1; ++i) md << "---|";
        md << '\n';
        for (const auto& s : strategies) {
            md << "| " << s << " |";
            double sum = 0.0;
            int n = 0;
            bool complete = true;
            for (const auto& t : tasks) {
                const json* c = cell(s, t);
                if (c && c->contains("normalized_bias_score")) {
                    double v = (*c)["normalized_bias_score"].get<double>();
                    md << ' ' << format2(v) << " |";
                    sum += v;
                    ++n;
                } else {
                    md << " - |";
                    complete = false;
                }
            }
            if (complete && n > 0) {
                md << ' ' << format2(sum / n) << " |\n";
            } else {
                md << " - |\n";
            }
        }

        md << "\n## Average accuracy\n\n| Approach |";
        for (const auto& t : tasks) md << ' ' << t << " |";
        md << " Overall |\n|---|";
        for (std::size_t i = 0; i < tasks.size() + 1; ++i) md << "---|";
        md << '\n';
        for (const auto& s : strategies) {
            md << "| " << s << " |";
            double sum = 0.0;
            int n = 0;
            bool complete = true;
            for (const auto& t : tasks) {
                const json* c = cell(s, t);
                if (c) {
                    double v = c->value("accuracy_average", 0.0);
                    md << ' ' << format2(v) << " |";
                    sum += v;
                    ++n;
                } else {
                    md << " - |";
                    complete = false;
                }
            }
            if (complete && n > 0) {
                md << ' ' << format2(sum / n) << " |\n";
            } else {
                md << " - |\n";
            }
        }

        ensure_out_dir(out_dir);
        write_text_file(out_dir / "combined.csv", csv.str());
        write_text_file(out_dir / "combined.md", md.str());
        out << md.str();
        return kExitOk;
    } catch (const std::exception& e) {
        return classify_error(e, err);
    }
}

}  // namespace fairtext::cli
