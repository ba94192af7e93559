#ifndef FAIRTEXT_MANIFEST_HPP
#define FAIRTEXT_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

namespace fairtext {

// Captures everything needed to reproduce a run byte-for-byte.
struct RunManifest {
    std::string command;
    nlohmann::json config;  // full option snapshot
    std::map<std::string, std::string> input_digests;   // path -> fnv1a64 hex
    std::map<std::string, std::string> output_files;
    std::uint64_t seed = 0;
    std::string toolkit_version;

    void add_input(const std::filesystem::path& path);
    void write(const std::filesystem::path& out_dir) const;
    static RunManifest read(const std::filesystem::path& out_dir);

    nlohmann::json to_json() const;
};

}  // namespace fairtext

#endif
