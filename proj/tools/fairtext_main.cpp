#include <iostream>

#include <CLI11.hpp>

#include "fairtext/commands.hpp"
#include "fairtext/util.hpp"

int main(int argc, char** argv) {
    using namespace fairtext::cli;

    CLI::App app{"fairtext: gender-bias audit and mitigation toolkit for text "
                 "classifiers"};
    app.set_version_flag("--version", fairtext::kToolkitVersion);
    app.require_subcommand(1);

    // validate
    std::string lexicon_path = default_lexicon_path().string();
    std::string gazetteer_path = default_gazetteer_path().string();
    auto* validate = app.add_subcommand(
        "validate", "Check the gendered-term lexicon and name gazetteer");
    validate->add_option("--lexicon", lexicon_path, "Lexicon TSV");
    validate->add_option("--gazetteer", gazetteer_path, "Name gazetteer TSV");

    // transform
    TransformOptions transform_options;
    std::string transform_input, transform_out;
    std::string transform_lexicon = default_lexicon_path().string();
    std::string transform_gazetteer = default_gazetteer_path().string();
    auto* transform = app.add_subcommand(
        "transform", "Build a paired counterfactual corpus from labeled JSONL");
    transform->add_option("input", transform_input, "Input corpus (JSONL)")
        ->required();
    transform->add_option("--out", transform_out, "Output directory")->required();
    transform->add_option("--lexicon", transform_lexicon, "Lexicon TSV");
    transform->add_option("--gazetteer", transform_gazetteer, "Name gazetteer TSV");
    transform->add_option("--cap", transform_options.cap,
                          "Maximum variants per sample");

    // train
    TrainOptions train_options;
    std::string train_pairs, train_out;
    std::string train_lexicon = default_lexicon_path().string();
    std::string train_gazetteer = default_gazetteer_path().string();
    auto* train = app.add_subcommand("train", "Train a classifier on paired data");
    train->add_option("pairs", train_pairs, "Paired corpus (JSONL)")->required();
    train->add_option("--out", train_out, "Output directory")->required();
    train->add_option("--strategy", train_options.strategy,
                      "zero_shot|fod|foa|tm|jlo");
    train->add_option("--lambda", train_options.lambda, "Debias loss weight");
    train->add_option("--epochs", train_options.epochs, "Training epochs");
    train->add_option("--batch-size", train_options.batch_size, "Batch size");
    train->add_option("--lr", train_options.learning_rate, "Learning rate");
    train->add_option("--dropout", train_options.dropout, "Dropout rate");
    train->add_option("--seed", train_options.seed, "Random seed");
    train->add_option("--embed-dim", train_options.embed_dim, "Embedding dimension");
    train->add_option("--min-freq", train_options.min_freq,
                      "Minimum token frequency for the vocabulary");
    train->add_flag("--serial", [&](std::int64_t) { train_options.parallel = false; },
                    "Use the serial reference kernels");
    train->add_option("--lexicon", train_lexicon, "Lexicon TSV (tm strategy)");
    train->add_option("--gazetteer", train_gazetteer,
                      "Name gazetteer TSV (tm strategy)");

    // evaluate
    EvaluateOptions evaluate_options;
    std::string eval_checkpoint, eval_pairs, eval_out;
    std::string eval_lexicon = default_lexicon_path().string();
    std::string eval_gazetteer = default_gazetteer_path().string();
    long baseline = -1;
    auto* evaluate =
        app.add_subcommand("evaluate", "Measure paired-prediction bias");
    evaluate->add_option("checkpoint", eval_checkpoint, "Model checkpoint")
        ->required();
    evaluate->add_option("pairs", eval_pairs, "Paired corpus (JSONL)")->required();
    evaluate->add_option("--out", eval_out, "Output directory")->required();
    evaluate->add_option("--baseline-mismatches", baseline,
                         "Zero-shot baseline mismatch count for bias scores");
    evaluate->add_option("--task", evaluate_options.task, "Task label");
    evaluate->add_option("--strategy", evaluate_options.strategy,
                         "Strategy label for combined reports");
    evaluate->add_flag("--mask", evaluate_options.mask,
                       "Mask names/gender terms before evaluating (tm models)");
    evaluate->add_option("--lexicon", eval_lexicon, "Lexicon TSV (with --mask)");
    evaluate->add_option("--gazetteer", eval_gazetteer,
                         "Name gazetteer TSV (with --mask)");

    // report
    std::vector<std::string> report_dirs;
    std::string report_out;
    auto* report = app.add_subcommand(
        "report", "Merge evaluation runs into one comparison table");
    report->add_option("runs", report_dirs, "Evaluation output directories")
        ->required();
    report->add_option("--out", report_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) {
        return cmd_validate(lexicon_path, gazetteer_path, std::cout, std::cerr);
    }
    if (transform->parsed()) {
        transform_options.input = transform_input;
        transform_options.out_dir = transform_out;
        transform_options.lexicon = transform_lexicon;
        transform_options.gazetteer = transform_gazetteer;
        return cmd_transform(transform_options, std::cout, std::cerr);
    }
    if (train->parsed()) {
        train_options.pairs = train_pairs;
        train_options.out_dir = train_out;
        train_options.lexicon = train_lexicon;
        train_options.gazetteer = train_gazetteer;
        return cmd_train(train_options, std::cout, std::cerr);
    }
    if (evaluate->parsed()) {
        evaluate_options.checkpoint = eval_checkpoint;
        evaluate_options.pairs = eval_pairs;
        evaluate_options.out_dir = eval_out;
        evaluate_options.lexicon = eval_lexicon;
        evaluate_options.gazetteer = eval_gazetteer;
        if (baseline >= 0) evaluate_options.baseline_mismatches = baseline;
        return cmd_evaluate(evaluate_options, std::cout, std::cerr);
    }
    if (report->parsed()) {
        std::vector<std::filesystem::path> dirs(report_dirs.begin(),
                                                report_dirs.end());
        return cmd_report(dirs, report_out, std::cout, std::cerr);
    }
    return kExitDomainError;
}
