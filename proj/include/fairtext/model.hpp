#ifndef FAIRTEXT_MODEL_HPP
#define FAIRTEXT_MODEL_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairtext/tokenize.hpp"

namespace fairtext {

inline constexpr const char* kUnkToken = "<unk>";

class Vocabulary {
public:
    Vocabulary();

    // Tokens with frequency >= min_freq, registered in first-occurrence order
    // after UNK.
    static Vocabulary build(std::span<const TokenSequence> corpus, int min_freq = 1);

    int id(std::string_view token) const;  // UNK id (0) when unregistered
    bool contains(std::string_view token) const;
    int add_token(const std::string& token);  // errors on duplicates
    int size() const { return static_cast<int>(id_to_token_.size()); }
    const std::vector<std::string>& tokens() const { return id_to_token_; }

private:
    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, int> token_to_id_;
};

using Vec = std::vector<double>;

struct ClassifierParams {
    int embed_dim = 0;
    int num_classes = 0;
    double dropout_rate = 0.0;
    std::uint64_t seed = 0;
    Vec embedding;     // vocab_size x embed_dim, row-major
    Vec head_weights;  // num_classes x embed_dim, row-major
    Vec head_bias;     // num_classes

    int vocab_size() const {
        return embed_dim == 0 ? 0 : static_cast<int>(embedding.size()) / embed_dim;
    }
    double* row(int token_id) {
        return embedding.data() + static_cast<std::size_t>(token_id) * embed_dim;
    }
    const double* row(int token_id) const {
        return embedding.data() + static_cast<std::size_t>(token_id) * embed_dim;
    }

    static ClassifierParams init(int vocab_size, int embed_dim, int num_classes,
                                 double dropout_rate, std::uint64_t seed);
};

// Columnwise max over token embedding rows; this is e1/e2 of the debias loss.
Vec embed_and_pool(const TokenSequence& tokens, const ClassifierParams& params,
                   const Vocabulary& vocab);

struct ForwardResult {
    Vec logits;
    Vec embedding;  // pre-dropout pooled embedding
};

// dropout_mask entries are 0 or 1/(1-p) (inverted dropout); nullptr = inference.
ForwardResult forward(const TokenSequence& tokens, const ClassifierParams& params,
                      const Vocabulary& vocab, const Vec* dropout_mask = nullptr);

// Argmax over inference logits; ties go to the lowest class index.
int predict(const TokenSequence& tokens, const ClassifierParams& params,
            const Vocabulary& vocab);

// Grows the vocabulary; new embedding rows come from the seeded init
// distribution, existing rows stay bit-identical.
void extend_vocab(ClassifierParams& params, Vocabulary& vocab,
                  std::span<const std::string> new_tokens);

void save_checkpoint(const std::filesystem::path& path,
                     const ClassifierParams& params, const Vocabulary& vocab);
std::pair<ClassifierParams, Vocabulary> load_checkpoint(
    const std::filesystem::path& path);

}  // namespace fairtext

#endif
