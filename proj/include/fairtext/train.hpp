#ifndef FAIRTEXT_TRAIN_HPP
#define FAIRTEXT_TRAIN_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairtext/model.hpp"
#include "fairtext/transform.hpp"

namespace fairtext {

enum class Strategy { zero_shot, fod, foa, tm, jlo };

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view s);

struct MitigationConfig {
    Strategy strategy = Strategy::jlo;
    double lambda = 1.0;
    int batch_size = 16;
    double learning_rate = 1e-4;
    int epochs = 15;
    double dropout_rate = 0.2;
    std::uint64_t seed = 42;
    // Parallel batch kernel; the serial reference path produces bit-identical
    // results and is kept for testing.
    bool parallel = true;
};

struct LossBreakdown {
    double ce = 0.0;
    double gb = 0.0;
    double joint = 0.0;
    double lambda = 0.0;
};

double cosine_similarity(const Vec& e1, const Vec& e2);
double gender_debias_loss(const Vec& e1, const Vec& e2);
double cross_entropy(const Vec& logits, int label);
LossBreakdown joint_loss(const Vec& logits, int label, const Vec& e1, const Vec& e2,
                         double lambda);

// Gradient of the joint loss wrt every parameter tensor. Embedding rows are
// kept sparse (only touched rows), ordered by token id for deterministic
// accumulation.
struct Gradients {
    std::map<int, Vec> embedding_rows;
    Vec head_weights;
    Vec head_bias;

    void accumulate(const Gradients& other);
    void scale(double factor);
};

// tokens_swapped == nullptr selects the cross-entropy-only path (the debias
// term is absent and swapped-side rows receive no gradient).
Gradients backward(const TokenSequence& tokens_original,
                   const TokenSequence* tokens_swapped, int label,
                   const ClassifierParams& params, const Vocabulary& vocab,
                   const Vec* dropout_mask, double lambda);

struct AdamState {
    Vec m_embedding, v_embedding;
    Vec m_head, v_head;
    Vec m_bias, v_bias;
    long step_count = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState init(const ClassifierParams& params);
};

// Standard Adam with bias correction; dense update (untouched embedding rows
// still see moment decay).
void adam_step(ClassifierParams& params, const Gradients& grads, AdamState& state,
               double learning_rate);

// One (possibly paired) training item.
struct TrainItem {
    const TokenSequence* original;
    const TokenSequence* swapped;  // nullptr outside JLO
    int label;
};

// Batch gradient kernels: mean gradient over the batch. Masks are
// pre-drawn per item (nullptr entry = no dropout). Both paths reduce in item
// order, so they agree bitwise.
Gradients batch_gradients_serial(std::span<const TrainItem> batch,
                                 std::span<const Vec* const> masks,
                                 const ClassifierParams& params,
                                 const Vocabulary& vocab, double lambda,
                                 std::vector<LossBreakdown>* losses = nullptr);
Gradients batch_gradients_parallel(std::span<const TrainItem> batch,
                                   std::span<const Vec* const> masks,
                                   const ClassifierParams& params,
                                   const Vocabulary& vocab, double lambda,
                                   std::vector<LossBreakdown>* losses = nullptr);

// Needed by the TM strategy to mask its training corpus.
struct MaskingContext {
    const GenderedLexicon* lexicon = nullptr;
    const NameGazetteer* gazetteer = nullptr;
    const NameDetector* detector = nullptr;
};

struct TrainResult {
    std::vector<LossBreakdown> epoch_log;  // per-epoch means
    std::size_t items_per_epoch = 0;       // training items the strategy materialized
};

TrainResult train(std::span<const PairedSample> pairs, const MitigationConfig& config,
                  ClassifierParams& params, Vocabulary& vocab,
                  const MaskingContext* masking = nullptr);

struct FiniteDiffResult {
    double max_rel_error = 0.0;
    bool tie_flagged = false;  // pooling near-tie; gradient non-smooth there
};

// Central finite differences over every parameter coordinate the instance
// touches.
FiniteDiffResult finite_difference_check(const TokenSequence& tokens_original,
                                         const TokenSequence* tokens_swapped,
                                         int label, const ClassifierParams& params,
                                         const Vocabulary& vocab,
                                         const Vec* dropout_mask, double lambda,
                                         double h);

}  // namespace fairtext

#endif
