#include "fairtext/model.hpp"

#include <limits>
#include <random>

#include <json.hpp>

#include "fairtext/errors.hpp"
#include "fairtext/util.hpp"

namespace fairtext {

using nlohmann::json;

Vocabulary::Vocabulary() {
    id_to_token_.emplace_back(kUnkToken);
    token_to_id_.emplace(kUnkToken, 0);
}

Vocabulary Vocabulary::build(std::span<const TokenSequence> corpus, int min_freq) {
    if (min_freq < 1) throw ConfigError("min_freq must be >= 1");
    std::unordered_map<std::string, int> freq;
    std::vector<const std::string*> order;  // first occurrence
    for (const auto& tokens : corpus) {
        for (const auto& tok : tokens) {
            if (++freq[tok] == 1) order.push_back(&tok);
        }
    }
    Vocabulary vocab;
    for (const std::string* tok : order) {
        if (freq[*tok] >= min_freq && !vocab.contains(*tok)) {
            vocab.add_token(*tok);
        }
    }
    return vocab;
}

int Vocabulary::id(std::string_view token) const {
    auto it = token_to_id_.find(std::string(token));
    return it == token_to_id_.end() ? 0 : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
    return token_to_id_.count(std::string(token)) > 0;
}

int Vocabulary::add_token(const std::string& token) {
    int new_id = size();
    if (!token_to_id_.emplace(token, new_id).second) {
        throw ValidationError("token '" + token + "' already registered");
    }
    id_to_token_.push_back(token);
    return new_id;
}

namespace {

constexpr double kInitRange = 0.1;

void fill_uniform(double* dst, std::size_t count, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-kInitRange, kInitRange);
    for (std::size_t i = 0; i < count; ++i) dst[i] = dist(rng);
}

}  // namespace

ClassifierParams ClassifierParams::init(int vocab_size, int embed_dim,
                                        int num_classes, double dropout_rate,
                                        std::uint64_t seed) {
    if (vocab_size < 1 || embed_dim < 1) throw ConfigError("bad model dimensions");
    if (num_classes < 2) throw ConfigError("num_classes must be >= 2");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw ConfigError("dropout_rate must lie in [0, 1)");
    }
    ClassifierParams p;
    p.embed_dim = embed_dim;
    p.num_classes = num_classes;
    p.dropout_rate = dropout_rate;
    p.seed = seed;
    p.embedding.resize(static_cast<std::size_t>(vocab_size) * embed_dim);
    p.head_weights.resize(static_cast<std::size_t>(num_classes) * embed_dim);
    p.head_bias.assign(num_classes, 0.0);

    std::mt19937_64 rng(seed);
    fill_uniform(p.embedding.data(), p.embedding.size(), rng);
    fill_uniform(p.head_weights.data(), p.head_weights.size(), rng);
    return p;
}

Vec embed_and_pool(const TokenSequence& tokens, const ClassifierParams& params,
                   const Vocabulary& vocab) {
    if (tokens.empty()) throw ValidationError("cannot embed an empty token sequence");
    Vec pooled(params.embed_dim, -std::numeric_limits<double>::infinity());
    for (const auto& tok : tokens) {
        const double* row = params.row(vocab.id(tok));
        for (int j = 0; j < params.embed_dim; ++j) {
            if (row[j] > pooled[j]) pooled[j] = row[j];
        }
    }
    return pooled;
}

ForwardResult forward(const TokenSequence& tokens, const ClassifierParams& params,
                      const Vocabulary& vocab, const Vec* dropout_mask) {
    ForwardResult result;
    result.embedding = embed_and_pool(tokens, params, vocab);
    if (dropout_mask && static_cast<int>(dropout_mask->size()) != params.embed_dim) {
        throw ConfigError("dropout mask size mismatch");
    }
    result.logits.resize(params.num_classes);
    for (int c = 0; c < params.num_classes; ++c) {
        const double* w = params.head_weights.data() +
                          static_cast<std::size_t>(c) * params.embed_dim;
        double acc = params.head_bias[c];
        for (int j = 0; j < params.embed_dim; ++j) {
            double h = dropout_mask ? result.embedding[j] * (*dropout_mask)[j]
                                    : result.embedding[j];
            acc += w[j] * h;
        }
        result.logits[c] = acc;
    }
    return result;
}

int predict(const TokenSequence& tokens, const ClassifierParams& params,
            const Vocabulary& vocab) {
    Vec logits = forward(tokens, params, vocab).logits;
    int best = 0;
    for (int c = 1; c < params.num_classes; ++c) {
        if (logits[c] > logits[best]) best = c;
    }
    return best;
}

void extend_vocab(ClassifierParams& params, Vocabulary& vocab,
                  std::span<const std::string> new_tokens) {
    for (const auto& tok : new_tokens) {
        if (vocab.contains(tok)) {
            throw ValidationError("token '" + tok + "' already registered");
        }
    }
    if (new_tokens.empty()) return;
    // Extension rows come from a stream keyed off (seed, old vocab size), so
    // the result only depends on the state being extended.
    std::mt19937_64 rng(fnv1a64_u64(static_cast<std::uint64_t>(vocab.size()),
                                    fnv1a64_u64(params.seed)));
    for (const auto& tok : new_tokens) {
        vocab.add_token(tok);
        std::size_t old_size = params.embedding.size();
        params.embedding.resize(old_size + params.embed_dim);
        fill_uniform(params.embedding.data() + old_size, params.embed_dim, rng);
    }
}

void save_checkpoint(const std::filesystem::path& path,
                     const ClassifierParams& params, const Vocabulary& vocab) {
    if (vocab.size() != params.vocab_size()) {
        throw ValidationError("checkpoint vocab/embedding size mismatch");
    }
    json j{{"format", "fairtext-checkpoint"},
           {"version", 1},
           {"embed_dim", params.embed_dim},
           {"num_classes", params.num_classes},
           {"dropout_rate", params.dropout_rate},
           {"seed", params.seed},
           {"tokens", vocab.tokens()},
           {"embedding", params.embedding},
           {"head_weights", params.head_weights},
           {"head_bias", params.head_bias}};
    write_text_file(path, j.dump() + "\n");
}

std::pair<ClassifierParams, Vocabulary> load_checkpoint(
    const std::filesystem::path& path) {
    json j = json::parse(read_text_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object() ||
        j.value("format", "") != "fairtext-checkpoint") {
        throw ParseError("not a fairtext checkpoint: " + path.string());
    }
    ClassifierParams p;
    p.embed_dim = j.at("embed_dim").get<int>();
    p.num_classes = j.at("num_classes").get<int>();
    p.dropout_rate = j.at("dropout_rate").get<double>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.embedding = j.at("embedding").get<Vec>();
    p.head_weights = j.at("head_weights").get<Vec>();
    p.head_bias = j.at("head_bias").get<Vec>();

    Vocabulary vocab;
    auto tokens = j.at("tokens").get<std::vector<std::string>>();
    if (tokens.empty() || tokens[0] != kUnkToken) {
        throw ParseError("checkpoint vocabulary must start with the UNK token");
    }
    for (std::size_t i = 1; i < tokens.size(); ++i) vocab.add_token(tokens[i]);

    if (vocab.size() != p.vocab_size() ||
        p.head_weights.size() !=
            static_cast<std::size_t>(p.num_classes) * p.embed_dim ||
        p.head_bias.size() != static_cast<std::size_t>(p.num_classes)) {
        throw ParseError("checkpoint tensor shapes are inconsistent");
    }
    return {std::move(p), std::move(vocab)};
}

}  // namespace fairtext
