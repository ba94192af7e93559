#ifndef FAIRTEXT_TEST_HELPERS_HPP
#define FAIRTEXT_TEST_HELPERS_HPP

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

namespace fairtext::testing {

inline std::filesystem::path bundled_data_dir() {
    return std::filesystem::path(FAIRTEXT_DATA_DIR);
}

inline std::filesystem::path golden_dir() {
    return std::filesystem::path(FAIRTEXT_GOLDEN_DIR);
}

// Fresh scratch directory per call; left behind under the system temp root.
inline std::filesystem::path scratch_dir(std::string_view tag) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("fairtext_test_" + std::string(tag) + "_" +
                std::to_string(counter.fetch_add(1)));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::filesystem::path write_file(const std::filesystem::path& dir,
                                        std::string_view name,
                                        std::string_view content) {
    auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

}  // namespace fairtext::testing

#endif
