#ifndef FAIRTEXT_UTIL_HPP
#define FAIRTEXT_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace fairtext {

inline constexpr const char* kToolkitVersion = "0.1.0";

// FNV-1a, 64 bit. Used for deterministic name selection and content digests.
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = kFnvOffset) {
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t value, std::uint64_t h = kFnvOffset) {
    for (int i = 0; i < 8; ++i) {
        h ^= static_cast<unsigned char>(value >> (8 * i));
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t digest_file(const std::filesystem::path& path);

// Round half away from zero at two decimals; applied at display time only.
// The nudge keeps decimal halves (e.g. mean(27.06, 45.87) = 36.465) on the
// away-from-zero side despite their binary representation.
inline double round2(double x) {
    return std::round(x * 100.0 + std::copysign(5e-10, x)) / 100.0;
}

std::string format2(double x);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace fairtext

#endif
