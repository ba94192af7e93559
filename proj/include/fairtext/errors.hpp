#ifndef FAIRTEXT_ERRORS_HPP
#define FAIRTEXT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fairtext {

// Malformed input data (bad TSV line, bad JSONL record, ...).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid input that violates a domain invariant.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad run configuration (unknown strategy, empty name set, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Missing or unreadable files.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fairtext

#endif
