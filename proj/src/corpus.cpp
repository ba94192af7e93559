#include "fairtext/corpus.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fairtext/errors.hpp"
#include "fairtext/util.hpp"

namespace fairtext {

using nlohmann::json;

namespace {

json parse_line(const std::filesystem::path& path, const std::string& line,
                std::size_t lineno) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": malformed JSONL record");
    }
    return j;
}

template <typename T>
T require(const json& j, const char* field, const std::filesystem::path& path,
          std::size_t lineno) {
    auto it = j.find(field);
    if (it == j.end()) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": missing field '" + field + "'");
    }
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": field '" + field + "' has the wrong type");
    }
}

}  // namespace

std::vector<LabeledSample> read_corpus_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file: " + path.string());

    std::vector<LabeledSample> corpus;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(path, line, lineno);
        LabeledSample s;
        s.id = require<std::string>(j, "id", path, lineno);
        s.text = require<std::string>(j, "text", path, lineno);
        s.label = require<int>(j, "label", path, lineno);
        if (s.label < 0) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": negative label");
        }
        corpus.push_back(std::move(s));
    }
    return corpus;
}

void write_corpus_jsonl(const std::filesystem::path& path,
                        std::span<const LabeledSample> corpus) {
    std::ostringstream out;
    for (const auto& s : corpus) {
        json j{{"id", s.id}, {"label", s.label}, {"text", s.text}};
        out << j.dump() << '\n';
    }
    write_text_file(path, out.str());
}

std::string paired_to_jsonl(std::span<const PairedSample> pairs) {
    std::ostringstream out;
    for (const auto& p : pairs) {
        json orig{{"pair_id", p.pair_id},
                  {"label", p.label},
                  {"variant", "original"},
                  {"variant_index", 0},
                  {"text", join_tokens(p.original)}};
        out << orig.dump() << '\n';
        for (std::size_t v = 0; v < p.variants.size(); ++v) {
            json var{{"pair_id", p.pair_id},
                     {"label", p.label},
                     {"variant", "swapped"},
                     {"variant_index", v + 1},
                     {"text", join_tokens(p.variants[v])}};
            out << var.dump() << '\n';
        }
    }
    return out.str();
}

void write_paired_jsonl(const std::filesystem::path& path,
                        std::span<const PairedSample> pairs) {
    write_text_file(path, paired_to_jsonl(pairs));
}

std::vector<PairedSample> read_paired_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open paired corpus file: " + path.string());

    std::vector<PairedSample> pairs;
    std::unordered_map<std::string, std::size_t> by_id;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(path, line, lineno);
        auto pair_id = require<std::string>(j, "pair_id", path, lineno);
        int label = require<int>(j, "label", path, lineno);
        auto variant = require<std::string>(j, "variant", path, lineno);
        auto index = require<std::size_t>(j, "variant_index", path, lineno);
        auto text = require<std::string>(j, "text", path, lineno);

        auto [it, fresh] = by_id.emplace(pair_id, pairs.size());
        if (fresh) {
            pairs.push_back(PairedSample{pair_id, label, {}, {}, 0});
        }
        PairedSample& pair = pairs[it->second];
        if (pair.label != label) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": label differs within pair '" + pair_id + "'");
        }
        if (variant == "original") {
            if (index != 0) {
                throw ParseError(path.string() + ":" + std::to_string(lineno) +
                                 ": original record must have variant_index 0");
            }
            pair.original = tokenize(text);
        } else if (variant == "swapped") {
            if (index == 0) {
                throw ParseError(path.string() + ":" + std::to_string(lineno) +
                                 ": swapped record must have variant_index >= 1");
            }
            if (pair.variants.size() < index) pair.variants.resize(index);
            pair.variants[index - 1] = tokenize(text);
        } else {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": unknown variant kind '" + variant + "'");
        }
    }
    for (const auto& p : pairs) {
        if (p.original.empty()) {
            throw ParseError(path.string() + ": pair '" + p.pair_id +
                             "' has no original record");
        }
        if (p.variants.empty()) {
            throw ParseError(path.string() + ": pair '" + p.pair_id +
                             "' has no swapped variant");
        }
        for (const auto& v : p.variants) {
            if (v.empty()) {
                throw ParseError(path.string() + ": pair '" + p.pair_id +
                                 "' has a missing variant index");
            }
        }
    }
    return pairs;
}

}  // namespace fairtext
