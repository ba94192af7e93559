#ifndef FAIRTEXT_CORPUS_HPP
#define FAIRTEXT_CORPUS_HPP

#include <filesystem>
#include <span>
#include <vector>

#include "fairtext/transform.hpp"

namespace fairtext {

// Input corpus: JSONL, one {"id","text","label"} record per line.
std::vector<LabeledSample> read_corpus_jsonl(const std::filesystem::path& path);
void write_corpus_jsonl(const std::filesystem::path& path,
                        std::span<const LabeledSample> corpus);

// Paired corpus: one line for the original plus one per variant, fields
// pair_id, label, variant ("original"|"swapped"), variant_index, text.
std::string paired_to_jsonl(std::span<const PairedSample> pairs);
void write_paired_jsonl(const std::filesystem::path& path,
                        std::span<const PairedSample> pairs);
std::vector<PairedSample> read_paired_jsonl(const std::filesystem::path& path);

}  // namespace fairtext

#endif
