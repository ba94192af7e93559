#ifndef FAIRTEXT_TRANSFORM_HPP
#define FAIRTEXT_TRANSFORM_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairtext/lexicon.hpp"
#include "fairtext/tokenize.hpp"

namespace fairtext {

inline constexpr const char* kNameToken = "<Name>";
inline constexpr const char* kGenderToken = "<Gender>";
inline constexpr std::size_t kDefaultVariantCap = 16;

struct LabeledSample {
    std::string id;
    std::string text;
    int label = 0;
};

struct PairedSample {
    std::string pair_id;
    int label = 0;
    TokenSequence original;
    std::vector<TokenSequence> variants;  // >= 1
    std::size_t canonical_variant = 0;
};

struct GenderTermHit {
    std::size_t index;
    const LexEntry* entry;
};

struct NameHit {
    std::size_t index;
    std::optional<Gender> gender;  // nullopt = detected but gender unknown
};

// Seam for the name-detection step; the bundled default is gazetteer lookup.
class NameDetector {
public:
    virtual ~NameDetector() = default;
    // Indices strictly increasing and in range.
    virtual std::vector<NameHit> detect(const TokenSequence& tokens) const = 0;
};

class GazetteerNameDetector : public NameDetector {
public:
    explicit GazetteerNameDetector(const NameGazetteer& gazetteer)
        : gazetteer_(&gazetteer) {}
    std::vector<NameHit> detect(const TokenSequence& tokens) const override;

private:
    const NameGazetteer* gazetteer_;
};

std::vector<GenderTermHit> detect_gender_terms(const TokenSequence& tokens,
                                               const GenderedLexicon& lexicon);

std::vector<LabeledSample> filter_gendered(std::span<const LabeledSample> corpus,
                                           const GenderedLexicon& lexicon);

struct SwappedVariant {
    TokenSequence tokens;
    // inserted[i] != 0 when tokens[i] came from a counterpart substitution.
    std::vector<char> inserted;
};

// Cartesian product over matched positions, leftmost position varying
// slowest, truncated to cap. Empty result when nothing matched.
std::vector<SwappedVariant> swap_gender_terms(const TokenSequence& tokens,
                                              const GenderedLexicon& lexicon,
                                              std::size_t cap);

std::vector<NameHit> detect_names_gazetteer(const TokenSequence& tokens,
                                            const NameGazetteer& gazetteer);

// Replaces each hit with a deterministically chosen name of the target gender.
// When a lexicon is given, gazetteer names that are also gendered terms (or
// counterpart words) are excluded from the replacement pool: such a token
// would read as a gender term downstream, breaking the masking identity.
TokenSequence replace_names(const TokenSequence& tokens,
                            const std::vector<NameHit>& hits,
                            const NameGazetteer& gazetteer, Gender target_gender,
                            std::string_view pair_id,
                            const GenderedLexicon* lexicon = nullptr);

std::vector<PairedSample> build_paired_dataset(std::span<const LabeledSample> corpus,
                                               const GenderedLexicon& lexicon,
                                               const NameGazetteer& gazetteer,
                                               const NameDetector& detector,
                                               std::size_t cap = kDefaultVariantCap);

TokenSequence mask_tokens(const TokenSequence& tokens, const GenderedLexicon& lexicon,
                          const NameGazetteer& gazetteer, const NameDetector& detector);

}  // namespace fairtext

#endif
