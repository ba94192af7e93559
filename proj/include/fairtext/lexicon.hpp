#ifndef FAIRTEXT_LEXICON_HPP
#define FAIRTEXT_LEXICON_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace fairtext {

enum class Gender { male, female };

inline Gender opposite(Gender g) {
    return g == Gender::male ? Gender::female : Gender::male;
}

std::string_view gender_name(Gender g);
std::optional<Gender> parse_gender(std::string_view s);

struct LexEntry {
    Gender gender;
    // Source-file order; drives deterministic variant expansion.
    std::vector<std::string> counterparts;
};

struct ValidationReport {
    std::vector<std::string> counterpart_only;
    // (term, counterpart) where counterpart is a key that does not list term back.
    std::vector<std::pair<std::string, std::string>> asymmetric;
    // term whose counterpart carries the same gender tag.
    std::vector<std::pair<std::string, std::string>> gender_conflicts;

    bool clean() const {
        return counterpart_only.empty() && asymmetric.empty() && gender_conflicts.empty();
    }
};

// Gendered-term dictionary. Immutable after load; safe for concurrent reads.
class GenderedLexicon {
public:
    GenderedLexicon() = default;

    static GenderedLexicon load(const std::filesystem::path& path);
    static GenderedLexicon from_entries(
        std::vector<std::pair<std::string, LexEntry>> entries);

    const LexEntry* find(std::string_view term) const;
    // Exact-match lookup; nullptr means no match.
    const std::vector<std::string>* counterparts(std::string_view term) const;

    std::size_t term_count() const { return entries_.size(); }
    const std::vector<std::pair<std::string, LexEntry>>& entries() const {
        return entries_;
    }

    // True if the token occurs as (a whitespace-separated word of) any counterpart.
    bool is_counterpart_word(std::string_view token) const;

    ValidationReport validate() const;
    void save(const std::filesystem::path& path) const;

private:
    void index();

    std::vector<std::pair<std::string, LexEntry>> entries_;  // load order
    std::unordered_map<std::string, std::size_t> by_term_;
    std::unordered_set<std::string> counterpart_words_;
};

// Male/female name sets; disjoint and non-empty.
class NameGazetteer {
public:
    static NameGazetteer load(const std::filesystem::path& path);
    static NameGazetteer from_names(std::vector<std::string> male,
                                    std::vector<std::string> female);

    std::optional<Gender> gender_of(std::string_view name) const;
    const std::vector<std::string>& names(Gender g) const {
        return g == Gender::male ? male_ : female_;
    }

private:
    NameGazetteer() = default;

    std::vector<std::string> male_, female_;  // load order
    std::unordered_set<std::string> male_set_, female_set_;
};

}  // namespace fairtext

#endif
