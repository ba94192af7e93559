#include "fairtext/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fairtext/errors.hpp"
#include "fairtext/util.hpp"

namespace fairtext {

std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::zero_shot: return "zero_shot";
        case Strategy::fod: return "fod";
        case Strategy::foa: return "foa";
        case Strategy::tm: return "tm";
        case Strategy::jlo: return "jlo";
    }
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
    if (s == "zero_shot" || s == "zero-shot") return Strategy::zero_shot;
    if (s == "fod") return Strategy::fod;
    if (s == "foa") return Strategy::foa;
    if (s == "tm") return Strategy::tm;
    if (s == "jlo") return Strategy::jlo;
    return std::nullopt;
}

namespace {

double norm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double cosine_similarity(const Vec& e1, const Vec& e2) {
    if (e1.size() != e2.size()) throw ConfigError("embedding size mismatch");
    double n1 = norm(e1), n2 = norm(e2);
    if (n1 == 0.0 || n2 == 0.0) {
        throw ValidationError("degenerate (zero-norm) embedding");
    }
    return std::clamp(dot(e1, e2) / (n1 * n2), -1.0, 1.0);
}

double gender_debias_loss(const Vec& e1, const Vec& e2) {
    return 1.0 - cosine_similarity(e1, e2);
}

double cross_entropy(const Vec& logits, int label) {
    if (label < 0 || label >= static_cast<int>(logits.size())) {
        throw ValidationError("label out of range");
    }
    double max_logit = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - max_logit);
    return std::log(sum) - (logits[label] - max_logit);
}

LossBreakdown joint_loss(const Vec& logits, int label, const Vec& e1, const Vec& e2,
                         double lambda) {
    LossBreakdown out;
    out.ce = cross_entropy(logits, label);
    out.gb = gender_debias_loss(e1, e2);
    out.lambda = lambda;
    out.joint = out.ce + lambda * out.gb;
    return out;
}

void Gradients::accumulate(const Gradients& other) {
    for (const auto& [row, grad] : other.embedding_rows) {
        auto [it, fresh] = embedding_rows.try_emplace(row, grad.size(), 0.0);
        for (std::size_t j = 0; j < grad.size(); ++j) it->second[j] += grad[j];
    }
    if (head_weights.empty()) head_weights.assign(other.head_weights.size(), 0.0);
    if (head_bias.empty()) head_bias.assign(other.head_bias.size(), 0.0);
    for (std::size_t i = 0; i < other.head_weights.size(); ++i) {
        head_weights[i] += other.head_weights[i];
    }
    for (std::size_t i = 0; i < other.head_bias.size(); ++i) {
        head_bias[i] += other.head_bias[i];
    }
}

void Gradients::scale(double factor) {
    for (auto& [row, grad] : embedding_rows) {
        for (double& g : grad) g *= factor;
    }
    for (double& g : head_weights) g *= factor;
    for (double& g : head_bias) g *= factor;
}

namespace {

// Routes a pooled-embedding gradient back to the embedding rows: each
// coordinate's gradient goes to the first token attaining the max.
void route_pool_gradient(const TokenSequence& tokens, const Vec& pool_grad,
                         const ClassifierParams& params, const Vocabulary& vocab,
                         Gradients& out) {
    const int d = params.embed_dim;
    std::vector<int> argmax_row(d, -1);
    Vec best(d, -std::numeric_limits<double>::infinity());
    for (const auto& tok : tokens) {
        int id = vocab.id(tok);
        const double* row = params.row(id);
        for (int j = 0; j < d; ++j) {
            if (row[j] > best[j]) {
                best[j] = row[j];
                argmax_row[j] = id;
            }
        }
    }
    for (int j = 0; j < d; ++j) {
        auto [it, fresh] = out.embedding_rows.try_emplace(argmax_row[j], d, 0.0);
        it->second[j] += pool_grad[j];
    }
}

}  // namespace

Gradients backward(const TokenSequence& tokens_original,
                   const TokenSequence* tokens_swapped, int label,
                   const ClassifierParams& params, const Vocabulary& vocab,
                   const Vec* dropout_mask, double lambda) {
    const int d = params.embed_dim;
    const int classes = params.num_classes;

    ForwardResult fwd = forward(tokens_original, params, vocab, dropout_mask);
    const Vec& e1 = fwd.embedding;
    if (label < 0 || label >= classes) throw ValidationError("label out of range");

    // softmax gradient
    double max_logit = *std::max_element(fwd.logits.begin(), fwd.logits.end());
    Vec probs(classes);
    double sum = 0.0;
    for (int c = 0; c < classes; ++c) {
        probs[c] = std::exp(fwd.logits[c] - max_logit);
        sum += probs[c];
    }
    for (int c = 0; c < classes; ++c) probs[c] /= sum;
    Vec dlogits = probs;
    dlogits[label] -= 1.0;

    Gradients grads;
    grads.head_weights.assign(static_cast<std::size_t>(classes) * d, 0.0);
    grads.head_bias.assign(classes, 0.0);

    Vec de1(d, 0.0);
    for (int c = 0; c < classes; ++c) {
        const double* w = params.head_weights.data() + static_cast<std::size_t>(c) * d;
        grads.head_bias[c] = dlogits[c];
        for (int j = 0; j < d; ++j) {
            double h = dropout_mask ? e1[j] * (*dropout_mask)[j] : e1[j];
            grads.head_weights[static_cast<std::size_t>(c) * d + j] = dlogits[c] * h;
            double scale = dropout_mask ? (*dropout_mask)[j] : 1.0;
            de1[j] += dlogits[c] * w[j] * scale;
        }
    }

    if (tokens_swapped != nullptr && lambda != 0.0) {
        Vec e2 = embed_and_pool(*tokens_swapped, params, vocab);
        double n1 = norm(e1), n2 = norm(e2);
        if (n1 == 0.0 || n2 == 0.0) {
            throw ValidationError("degenerate (zero-norm) embedding");
        }
        double cos = dot(e1, e2) / (n1 * n2);
        Vec de2(d, 0.0);
        for (int j = 0; j < d; ++j) {
            // d(1-cos)/de1 = cos*e1/|e1|^2 - e2/(|e1||e2|), symmetric in e2.
            de1[j] += lambda * (cos * e1[j] / (n1 * n1) - e2[j] / (n1 * n2));
            de2[j] = lambda * (cos * e2[j] / (n2 * n2) - e1[j] / (n1 * n2));
        }
        route_pool_gradient(*tokens_swapped, de2, params, vocab, grads);
    }
    route_pool_gradient(tokens_original, de1, params, vocab, grads);
    return grads;
}

AdamState AdamState::init(const ClassifierParams& params) {
    AdamState s;
    s.m_embedding.assign(params.embedding.size(), 0.0);
    s.v_embedding.assign(params.embedding.size(), 0.0);
    s.m_head.assign(params.head_weights.size(), 0.0);
    s.v_head.assign(params.head_weights.size(), 0.0);
    s.m_bias.assign(params.head_bias.size(), 0.0);
    s.v_bias.assign(params.head_bias.size(), 0.0);
    return s;
}

namespace {

void adam_update(double* theta, const double* grad, double* m, double* v,
                 std::size_t count, double lr, double beta1, double beta2,
                 double eps, double bc1, double bc2) {
    for (std::size_t i = 0; i < count; ++i) {
        double g = grad ? grad[i] : 0.0;
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        double mhat = m[i] / bc1;
        double vhat = v[i] / bc2;
        theta[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace

void adam_step(ClassifierParams& params, const Gradients& grads, AdamState& state,
               double learning_rate) {
    if (state.m_embedding.size() != params.embedding.size() ||
        state.m_head.size() != params.head_weights.size() ||
        state.m_bias.size() != params.head_bias.size()) {
        throw ConfigError("Adam state shape mismatch");
    }
    if (!grads.head_weights.empty() &&
        grads.head_weights.size() != params.head_weights.size()) {
        throw ConfigError("gradient shape mismatch");
    }
    ++state.step_count;
    double bc1 = 1.0 - std::pow(state.beta1, state.step_count);
    double bc2 = 1.0 - std::pow(state.beta2, state.step_count);
    const int d = params.embed_dim;
    const int vocab_size = params.vocab_size();

    Vec zero_row(d, 0.0);
    for (int r = 0; r < vocab_size; ++r) {
        auto it = grads.embedding_rows.find(r);
        const double* g = it == grads.embedding_rows.end() ? zero_row.data()
                                                           : it->second.data();
        std::size_t off = static_cast<std::size_t>(r) * d;
        adam_update(params.embedding.data() + off, g, state.m_embedding.data() + off,
                    state.v_embedding.data() + off, d, learning_rate, state.beta1,
                    state.beta2, state.epsilon, bc1, bc2);
    }
    adam_update(params.head_weights.data(),
                grads.head_weights.empty() ? nullptr : grads.head_weights.data(),
                state.m_head.data(), state.v_head.data(), params.head_weights.size(),
                learning_rate, state.beta1, state.beta2, state.epsilon, bc1, bc2);
    adam_update(params.head_bias.data(),
                grads.head_bias.empty() ? nullptr : grads.head_bias.data(),
                state.m_bias.data(), state.v_bias.data(), params.head_bias.size(),
                learning_rate, state.beta1, state.beta2, state.epsilon, bc1, bc2);
}

namespace {

LossBreakdown item_loss(const TrainItem& item, const Vec* mask,
                        const ClassifierParams& params, const Vocabulary& vocab,
                        double lambda) {
    ForwardResult fwd = forward(*item.original, params, vocab, mask);
    LossBreakdown loss;
    if (item.swapped != nullptr) {
        Vec e2 = embed_and_pool(*item.swapped, params, vocab);
        loss = joint_loss(fwd.logits, item.label, fwd.embedding, e2, lambda);
    } else {
        loss.ce = cross_entropy(fwd.logits, item.label);
        loss.joint = loss.ce;
        loss.lambda = lambda;
    }
    return loss;
}

}  // namespace

Gradients batch_gradients_serial(std::span<const TrainItem> batch,
                                 std::span<const Vec* const> masks,
                                 const ClassifierParams& params,
                                 const Vocabulary& vocab, double lambda,
                                 std::vector<LossBreakdown>* losses) {
    std::vector<Gradients> per_item(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        per_item[i] = backward(*batch[i].original, batch[i].swapped, batch[i].label,
                               params, vocab, masks[i], lambda);
    }
    Gradients total;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        total.accumulate(per_item[i]);
        if (losses) {
            losses->push_back(item_loss(batch[i], masks[i], params, vocab, lambda));
        }
    }
    total.scale(1.0 / static_cast<double>(batch.size()));
    return total;
}

Gradients batch_gradients_parallel(std::span<const TrainItem> batch,
                                   std::span<const Vec* const> masks,
                                   const ClassifierParams& params,
                                   const Vocabulary& vocab, double lambda,
                                   std::vector<LossBreakdown>* losses) {
    std::vector<Gradients> per_item(batch.size());
    std::vector<LossBreakdown> per_item_loss(batch.size());
    const bool want_losses = losses != nullptr;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(batch.size()); ++i) {
        per_item[i] = backward(*batch[i].original, batch[i].swapped, batch[i].label,
                               params, vocab, masks[i], lambda);
        if (want_losses) {
            per_item_loss[i] = item_loss(batch[i], masks[i], params, vocab, lambda);
        }
    }
    // Reduce in item order; matches the serial path bitwise.
    Gradients total;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        total.accumulate(per_item[i]);
        if (losses) losses->push_back(per_item_loss[i]);
    }
    total.scale(1.0 / static_cast<double>(batch.size()));
    return total;
}

TrainResult train(std::span<const PairedSample> pairs, const MitigationConfig& config,
                  ClassifierParams& params, Vocabulary& vocab,
                  const MaskingContext* masking) {
    TrainResult result;
    if (config.strategy == Strategy::zero_shot) return result;
    if (pairs.empty()) throw ConfigError("training corpus is empty");
    if (config.batch_size < 1 || config.epochs < 0) {
        throw ConfigError("bad batch size or epoch count");
    }

    // Materialize the strategy's training items.
    std::vector<TokenSequence> owned;  // masked sequences for TM
    std::vector<TrainItem> items;
    switch (config.strategy) {
        case Strategy::fod:
            for (const auto& p : pairs) items.push_back({&p.original, nullptr, p.label});
            break;
        case Strategy::foa:
            for (const auto& p : pairs) items.push_back({&p.original, nullptr, p.label});
            for (const auto& p : pairs) {
                if (p.canonical_variant >= p.variants.size()) {
                    throw ConfigError("pair '" + p.pair_id + "' has no canonical variant");
                }
                items.push_back({&p.variants[p.canonical_variant], nullptr, p.label});
            }
            break;
        case Strategy::tm: {
            if (!masking || !masking->lexicon || !masking->gazetteer ||
                !masking->detector) {
                throw ConfigError("token masking requires lexicon and gazetteer");
            }
            std::vector<std::string> special;
            if (!vocab.contains(kNameToken)) special.emplace_back(kNameToken);
            if (!vocab.contains(kGenderToken)) special.emplace_back(kGenderToken);
            extend_vocab(params, vocab, special);
            owned.reserve(pairs.size());
            for (const auto& p : pairs) {
                owned.push_back(mask_tokens(p.original, *masking->lexicon,
                                            *masking->gazetteer, *masking->detector));
            }
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                items.push_back({&owned[i], nullptr, pairs[i].label});
            }
            break;
        }
        case Strategy::jlo:
            for (const auto& p : pairs) {
                if (p.canonical_variant >= p.variants.size()) {
                    throw ConfigError("joint loss optimization needs a variant for pair '" +
                                      p.pair_id + "'");
                }
                items.push_back(
                    {&p.original, &p.variants[p.canonical_variant], p.label});
            }
            break;
        case Strategy::zero_shot:
            break;
    }

    result.items_per_epoch = items.size();

    const double lambda = config.strategy == Strategy::jlo ? config.lambda : 0.0;
    const double p_drop = config.dropout_rate;
    const int d = params.embed_dim;
    AdamState adam = AdamState::init(params);

    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::mt19937_64 rng(
            fnv1a64_u64(static_cast<std::uint64_t>(epoch), fnv1a64_u64(config.seed)));
        std::shuffle(order.begin(), order.end(), rng);

        std::vector<LossBreakdown> epoch_losses;
        epoch_losses.reserve(items.size());
        std::bernoulli_distribution keep(1.0 - p_drop);

        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            std::size_t end = std::min(order.size(),
                                       start + static_cast<std::size_t>(config.batch_size));
            std::vector<TrainItem> batch;
            std::vector<Vec> mask_storage;
            batch.reserve(end - start);
            mask_storage.reserve(end - start);
            for (std::size_t k = start; k < end; ++k) {
                batch.push_back(items[order[k]]);
                Vec mask;
                if (p_drop > 0.0) {
                    mask.resize(d);
                    double inv = 1.0 / (1.0 - p_drop);
                    for (int j = 0; j < d; ++j) mask[j] = keep(rng) ? inv : 0.0;
                }
                mask_storage.push_back(std::move(mask));
            }
            std::vector<const Vec*> masks;
            for (const auto& m : mask_storage) {
                masks.push_back(m.empty() ? nullptr : &m);
            }
            Gradients grads =
                config.parallel
                    ? batch_gradients_parallel(batch, masks, params, vocab, lambda,
                                               &epoch_losses)
                    : batch_gradients_serial(batch, masks, params, vocab, lambda,
                                             &epoch_losses);
            adam_step(params, grads, adam, config.learning_rate);
        }

        LossBreakdown mean;
        mean.lambda = lambda;
        for (const auto& l : epoch_losses) {
            mean.ce += l.ce;
            mean.gb += l.gb;
            mean.joint += l.joint;
        }
        double n = static_cast<double>(epoch_losses.size());
        mean.ce /= n;
        mean.gb /= n;
        mean.joint /= n;
        result.epoch_log.push_back(mean);
    }
    return result;
}

FiniteDiffResult finite_difference_check(const TokenSequence& tokens_original,
                                         const TokenSequence* tokens_swapped,
                                         int label, const ClassifierParams& params,
                                         const Vocabulary& vocab,
                                         const Vec* dropout_mask, double lambda,
                                         double h) {
    if (h <= 0.0) throw ConfigError("finite-difference step must be positive");
    FiniteDiffResult result;
    const int d = params.embed_dim;

    // Near-ties in the pooling max make the loss non-smooth; flag and let the
    // caller skip the instance.
    auto has_tie = [&](const TokenSequence& tokens) {
        std::vector<int> ids;
        for (const auto& tok : tokens) ids.push_back(vocab.id(tok));
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        if (ids.size() < 2) return false;
        for (int j = 0; j < d; ++j) {
            double best = -std::numeric_limits<double>::infinity();
            double second = best;
            for (int id : ids) {
                double v = params.row(id)[j];
                if (v > best) {
                    second = best;
                    best = v;
                } else if (v > second) {
                    second = v;
                }
            }
            if (best - second < 10.0 * h) return true;
        }
        return false;
    };
    if (has_tie(tokens_original) || (tokens_swapped && has_tie(*tokens_swapped))) {
        result.tie_flagged = true;
        return result;
    }

    Gradients analytic = backward(tokens_original, tokens_swapped, label, params,
                                  vocab, dropout_mask, lambda);

    ClassifierParams probe = params;
    auto loss_at = [&]() {
        TrainItem item{&tokens_original, tokens_swapped, label};
        return item_loss(item, dropout_mask, probe, vocab, lambda).joint;
    };
    auto central = [&](double& coord) {
        double saved = coord;
        coord = saved + h;
        double up = loss_at();
        coord = saved - h;
        double down = loss_at();
        coord = saved;
        return (up - down) / (2.0 * h);
    };
    auto check = [&](double& coord, double analytic_g) {
        double fd = central(coord);
        double denom = std::max({std::abs(fd), std::abs(analytic_g), 1e-6});
        double rel = std::abs(fd - analytic_g) / denom;
        if (std::abs(fd) < 1e-12 && std::abs(analytic_g) < 1e-12) rel = 0.0;
        result.max_rel_error = std::max(result.max_rel_error, rel);
    };

    std::vector<int> touched;
    for (const auto& tok : tokens_original) touched.push_back(vocab.id(tok));
    if (tokens_swapped) {
        for (const auto& tok : *tokens_swapped) touched.push_back(vocab.id(tok));
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    Vec zero_row(d, 0.0);
    for (int id : touched) {
        auto it = analytic.embedding_rows.find(id);
        const double* g = it == analytic.embedding_rows.end() ? zero_row.data()
                                                              : it->second.data();
        for (int j = 0; j < d; ++j) {
            check(probe.embedding[static_cast<std::size_t>(id) * d + j], g[j]);
        }
    }
    for (std::size_t i = 0; i < probe.head_weights.size(); ++i) {
        check(probe.head_weights[i], analytic.head_weights[i]);
    }
    for (std::size_t i = 0; i < probe.head_bias.size(); ++i) {
        check(probe.head_bias[i], analytic.head_bias[i]);
    }
    return result;
}

}  // namespace fairtext
