#include "fairtext/manifest.hpp"

#include <cstdio>

#include "fairtext/errors.hpp"
#include "fairtext/util.hpp"

namespace fairtext {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

void RunManifest::add_input(const std::filesystem::path& path) {
    input_digests[path.string()] = hex64(digest_file(path));
}

json RunManifest::to_json() const {
    return json{{"command", command},
                {"config", config},
                {"inputs", input_digests},
                {"outputs", output_files},
                {"seed", seed},
                {"toolkit_version", toolkit_version}};
}

void RunManifest::write(const std::filesystem::path& out_dir) const {
    write_text_file(out_dir / "manifest.json", to_json().dump(2) + "\n");
}

RunManifest RunManifest::read(const std::filesystem::path& out_dir) {
    json j = json::parse(read_text_file(out_dir / "manifest.json"), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ParseError("malformed manifest in " + out_dir.string());
    }
    RunManifest m;
    m.command = j.value("command", "");
    m.config = j.value("config", json::object());
    m.input_digests =
        j.value("inputs", std::map<std::string, std::string>{});
    m.output_files =
        j.value("outputs", std::map<std::string, std::string>{});
    m.seed = j.value("seed", std::uint64_t{0});
    m.toolkit_version = j.value("toolkit_version", "");
    return m;
}

}  // namespace fairtext
