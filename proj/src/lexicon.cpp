#include "fairtext/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "fairtext/errors.hpp"
#include "fairtext/util.hpp"

namespace fairtext {

std::string_view gender_name(Gender g) {
    return g == Gender::male ? "male" : "female";
}

std::optional<Gender> parse_gender(std::string_view s) {
    if (s == "male") return Gender::male;
    if (s == "female") return Gender::female;
    return std::nullopt;
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

GenderedLexicon GenderedLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon file: " + path.string());

    std::vector<std::pair<std::string, LexEntry>> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        auto cols = split(line, '\t');
        if (cols.size() != 3) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected 3 tab-separated columns, got " +
                             std::to_string(cols.size()));
        }
        auto gender = parse_gender(cols[1]);
        if (!gender) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": unknown gender tag '" + cols[1] + "'");
        }
        LexEntry entry{*gender, split(cols[2], '|')};
        if (entry.counterparts.size() == 1 && entry.counterparts[0].empty()) {
            entry.counterparts.clear();
        }
        entries.emplace_back(std::move(cols[0]), std::move(entry));
    }
    try {
        return from_entries(std::move(entries));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

GenderedLexicon GenderedLexicon::from_entries(
    std::vector<std::pair<std::string, LexEntry>> entries) {
    GenderedLexicon lex;
    lex.entries_ = std::move(entries);
    for (const auto& [term, entry] : lex.entries_) {
        if (term.empty()) throw ValidationError("empty surface term");
        if (entry.counterparts.empty()) {
            throw ValidationError("term '" + term + "' has no counterparts");
        }
        std::unordered_set<std::string_view> seen;
        for (const auto& c : entry.counterparts) {
            if (c.empty()) {
                throw ValidationError("term '" + term + "' has an empty counterpart");
            }
            if (c == term) {
                throw ValidationError("term '" + term + "' lists itself as a counterpart");
            }
            if (!seen.insert(c).second) {
                throw ValidationError("term '" + term + "' lists counterpart '" + c +
                                      "' more than once");
            }
        }
    }
    lex.index();
    return lex;
}

void GenderedLexicon::index() {
    by_term_.clear();
    counterpart_words_.clear();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& term = entries_[i].first;
        if (!by_term_.emplace(term, i).second) {
            throw ValidationError("duplicate term '" + term + "'");
        }
        for (const auto& c : entries_[i].second.counterparts) {
            std::istringstream words(c);
            std::string w;
            while (words >> w) counterpart_words_.insert(w);
        }
    }
}

const LexEntry* GenderedLexicon::find(std::string_view term) const {
    auto it = by_term_.find(std::string(term));
    return it == by_term_.end() ? nullptr : &entries_[it->second].second;
}

const std::vector<std::string>* GenderedLexicon::counterparts(
    std::string_view term) const {
    const LexEntry* e = find(term);
    return e ? &e->counterparts : nullptr;
}

bool GenderedLexicon::is_counterpart_word(std::string_view token) const {
    return counterpart_words_.count(std::string(token)) > 0;
}

ValidationReport GenderedLexicon::validate() const {
    ValidationReport report;
    std::unordered_set<std::string> flagged;
    for (const auto& [term, entry] : entries_) {
        for (const auto& c : entry.counterparts) {
            const LexEntry* other = find(c);
            if (!other) {
                if (flagged.insert(c).second) report.counterpart_only.push_back(c);
                continue;
            }
            if (other->gender == entry.gender) {
                report.gender_conflicts.emplace_back(term, c);
            }
            bool lists_back = std::find(other->counterparts.begin(),
                                        other->counterparts.end(),
                                        term) != other->counterparts.end();
            if (!lists_back) report.asymmetric.emplace_back(term, c);
        }
    }
    return report;
}

void GenderedLexicon::save(const std::filesystem::path& path) const {
    std::ostringstream out;
    out << "# Gendered term lexicon: term<TAB>gender<TAB>counterpart1|counterpart2|...\n";
    for (const auto& [term, entry] : entries_) {
        out << term << '\t' << gender_name(entry.gender) << '\t';
        for (std::size_t i = 0; i < entry.counterparts.size(); ++i) {
            if (i) out << '|';
            out << entry.counterparts[i];
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

NameGazetteer NameGazetteer::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open gazetteer file: " + path.string());

    std::vector<std::string> male, female;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        auto cols = split(line, '\t');
        if (cols.size() != 2) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected 2 tab-separated columns, got " +
                             std::to_string(cols.size()));
        }
        auto gender = parse_gender(cols[1]);
        if (!gender) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": unknown gender tag '" + cols[1] + "'");
        }
        (*gender == Gender::male ? male : female).push_back(std::move(cols[0]));
    }
    return from_names(std::move(male), std::move(female));
}

NameGazetteer NameGazetteer::from_names(std::vector<std::string> male,
                                        std::vector<std::string> female) {
    NameGazetteer gaz;
    gaz.male_ = std::move(male);
    gaz.female_ = std::move(female);
    if (gaz.male_.empty()) throw ValidationError("gazetteer has no male names");
    if (gaz.female_.empty()) throw ValidationError("gazetteer has no female names");
    for (const auto& n : gaz.male_) {
        if (!gaz.male_set_.insert(n).second) {
            throw ValidationError("duplicate male name '" + n + "'");
        }
    }
    for (const auto& n : gaz.female_) {
        if (!gaz.female_set_.insert(n).second) {
            throw ValidationError("duplicate female name '" + n + "'");
        }
        if (gaz.male_set_.count(n)) {
            throw ValidationError("name '" + n + "' appears in both gender sets");
        }
    }
    return gaz;
}

std::optional<Gender> NameGazetteer::gender_of(std::string_view name) const {
    std::string key(name);
    if (male_set_.count(key)) return Gender::male;
    if (female_set_.count(key)) return Gender::female;
    return std::nullopt;
}

}  // namespace fairtext
