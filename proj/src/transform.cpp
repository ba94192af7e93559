#include "fairtext/transform.hpp"

#include <algorithm>
#include <sstream>

#include "fairtext/errors.hpp"
#include "fairtext/util.hpp"

namespace fairtext {

std::vector<NameHit> GazetteerNameDetector::detect(const TokenSequence& tokens) const {
    return detect_names_gazetteer(tokens, *gazetteer_);
}

std::vector<GenderTermHit> detect_gender_terms(const TokenSequence& tokens,
                                               const GenderedLexicon& lexicon) {
    std::vector<GenderTermHit> hits;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (const LexEntry* e = lexicon.find(tokens[i])) {
            hits.push_back({i, e});
        }
    }
    return hits;
}

std::vector<LabeledSample> filter_gendered(std::span<const LabeledSample> corpus,
                                           const GenderedLexicon& lexicon) {
    std::vector<LabeledSample> kept;
    for (const auto& sample : corpus) {
        if (!detect_gender_terms(tokenize(sample.text), lexicon).empty()) {
            kept.push_back(sample);
        }
    }
    return kept;
}

namespace {

std::vector<std::string> split_words(const std::string& phrase) {
    std::vector<std::string> words;
    std::istringstream in(phrase);
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

}  // namespace

std::vector<SwappedVariant> swap_gender_terms(const TokenSequence& tokens,
                                              const GenderedLexicon& lexicon,
                                              std::size_t cap) {
    if (cap < 1) throw ConfigError("variant cap must be >= 1");
    auto hits = detect_gender_terms(tokens, lexicon);
    if (hits.empty()) return {};

    std::size_t total = 1;
    for (const auto& hit : hits) {
        std::size_t n = hit.entry->counterparts.size();
        if (total > cap) break;  // avoid overflow; already past the cap
        total *= n;
    }
    std::size_t count = std::min(total, cap);

    std::vector<SwappedVariant> variants;
    variants.reserve(count);
    std::vector<std::size_t> choice(hits.size(), 0);
    for (std::size_t v = 0; v < count; ++v) {
        // Decode v into per-position counterpart choices, leftmost slowest.
        std::size_t rem = v;
        for (std::size_t p = hits.size(); p-- > 0;) {
            std::size_t n = hits[p].entry->counterparts.size();
            choice[p] = rem % n;
            rem /= n;
        }
        SwappedVariant var;
        std::size_t next_hit = 0;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (next_hit < hits.size() && hits[next_hit].index == i) {
                const std::string& counterpart =
                    hits[next_hit].entry->counterparts[choice[next_hit]];
                for (auto& w : split_words(counterpart)) {
                    var.tokens.push_back(std::move(w));
                    var.inserted.push_back(1);
                }
                ++next_hit;
            } else {
                var.tokens.push_back(tokens[i]);
                var.inserted.push_back(0);
            }
        }
        variants.push_back(std::move(var));
    }
    return variants;
}

std::vector<NameHit> detect_names_gazetteer(const TokenSequence& tokens,
                                            const NameGazetteer& gazetteer) {
    std::vector<NameHit> hits;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (auto g = gazetteer.gender_of(tokens[i])) {
            hits.push_back({i, g});
        }
    }
    return hits;
}

TokenSequence replace_names(const TokenSequence& tokens,
                            const std::vector<NameHit>& hits,
                            const NameGazetteer& gazetteer, Gender target_gender,
                            std::string_view pair_id,
                            const GenderedLexicon* lexicon) {
    std::vector<const std::string*> pool;
    for (const auto& name : gazetteer.names(target_gender)) {
        if (lexicon != nullptr &&
            (lexicon->find(name) != nullptr || lexicon->is_counterpart_word(name))) {
            continue;
        }
        pool.push_back(&name);
    }
    if (pool.empty()) throw ConfigError("target-gender name set is empty");

    TokenSequence out = tokens;
    for (const auto& hit : hits) {
        if (hit.index >= out.size()) {
            throw ValidationError("name hit index out of range");
        }
        std::uint64_t h = fnv1a64_u64(hit.index, fnv1a64(pair_id));
        out[hit.index] = *pool[h % pool.size()];
    }
    return out;
}

std::vector<PairedSample> build_paired_dataset(std::span<const LabeledSample> corpus,
                                               const GenderedLexicon& lexicon,
                                               const NameGazetteer& gazetteer,
                                               const NameDetector& detector,
                                               std::size_t cap) {
    std::vector<PairedSample> pairs;
    for (const auto& sample : corpus) {
        TokenSequence tokens = tokenize(sample.text);
        auto hits = detect_gender_terms(tokens, lexicon);
        if (hits.empty()) continue;

        // Target gender for name replacement: opposite of the majority gender
        // among term hits, tie broken by the first hit.
        int male_hits = 0, female_hits = 0;
        for (const auto& h : hits) {
            (h.entry->gender == Gender::male ? male_hits : female_hits)++;
        }
        Gender majority = male_hits > female_hits   ? Gender::male
                          : female_hits > male_hits ? Gender::female
                                                    : hits.front().entry->gender;
        Gender target = opposite(majority);

        PairedSample pair;
        pair.pair_id = sample.id;
        pair.label = sample.label;
        pair.original = tokens;
        for (auto& variant : swap_gender_terms(tokens, lexicon, cap)) {
            auto name_hits = detector.detect(variant.tokens);
            // Positions filled in by the term swap are not names.
            std::erase_if(name_hits, [&](const NameHit& h) {
                return variant.inserted[h.index] != 0;
            });
            pair.variants.push_back(replace_names(variant.tokens, name_hits,
                                                  gazetteer, target, pair.pair_id,
                                                  &lexicon));
        }
        pair.canonical_variant = 0;
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

TokenSequence mask_tokens(const TokenSequence& tokens, const GenderedLexicon& lexicon,
                          const NameGazetteer& gazetteer, const NameDetector& detector) {
    std::vector<char> is_name(tokens.size(), 0);
    for (const auto& hit : detector.detect(tokens)) {
        if (hit.index < tokens.size()) is_name[hit.index] = 1;
    }
    for (const auto& hit : detect_names_gazetteer(tokens, gazetteer)) {
        is_name[hit.index] = 1;
    }

    TokenSequence out;
    out.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        // Counterpart words count as gender terms so that a swapped variant
        // masks to the same sequence as its original.
        if (lexicon.find(tok) != nullptr || lexicon.is_counterpart_word(tok)) {
            // Collapse runs: a multi-word counterpart stands for one term.
            if (out.empty() || out.back() != kGenderToken) {
                out.push_back(kGenderToken);
            }
        } else if (is_name[i]) {
            out.push_back(kNameToken);
        } else {
            out.push_back(tok);
        }
    }
    return out;
}

}  // namespace fairtext
