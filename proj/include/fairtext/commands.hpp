#ifndef FAIRTEXT_COMMANDS_HPP
#define FAIRTEXT_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fairtext::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitIoError = 2;

inline constexpr const char* kDataDirEnv = "FAIRTEXT_DATA_DIR";

std::filesystem::path default_data_dir();
std::filesystem::path default_lexicon_path();
std::filesystem::path default_gazetteer_path();

int cmd_validate(const std::filesystem::path& lexicon_path,
                 const std::filesystem::path& gazetteer_path, std::ostream& out,
                 std::ostream& err);

struct TransformOptions {
    std::filesystem::path input;
    std::filesystem::path lexicon = default_lexicon_path();
    std::filesystem::path gazetteer = default_gazetteer_path();
    std::filesystem::path out_dir;
    std::size_t cap = 16;
};
int cmd_transform(const TransformOptions& options, std::ostream& out,
                  std::ostream& err);

struct TrainOptions {
    std::filesystem::path pairs;
    std::filesystem::path out_dir;
    std::string strategy = "jlo";
    double lambda = 1.0;
    int epochs = 15;
    int batch_size = 16;
    double learning_rate = 1e-4;
    double dropout = 0.2;
    std::uint64_t seed = 42;
    int embed_dim = 32;
    int min_freq = 1;
    bool parallel = true;
    // Needed by the tm strategy only.
    std::filesystem::path lexicon = default_lexicon_path();
    std::filesystem::path gazetteer = default_gazetteer_path();
};
int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err);

struct EvaluateOptions {
    std::filesystem::path checkpoint;
    std::filesystem::path pairs;
    std::filesystem::path out_dir;
    std::optional<long> baseline_mismatches;
    std::string task = "task";
    std::string strategy;
    // Evaluate on masked inputs (for tm-trained checkpoints).
    bool mask = false;
    std::filesystem::path lexicon = default_lexicon_path();
    std::filesystem::path gazetteer = default_gazetteer_path();
};
int cmd_evaluate(const EvaluateOptions& options, std::ostream& out,
                 std::ostream& err);

int cmd_report(const std::vector<std::filesystem::path>& run_dirs,
               const std::filesystem::path& out_dir, std::ostream& out,
               std::ostream& err);

}  // namespace fairtext::cli

#endif
