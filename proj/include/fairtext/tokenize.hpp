#ifndef FAIRTEXT_TOKENIZE_HPP
#define FAIRTEXT_TOKENIZE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fairtext {

using TokenSequence = std::vector<std::string>;

// Whitespace split with leading/trailing punctuation peeled into separate
// single-character tokens. Interior characters are never touched, so
// transliteration-internal marks ('/', '{', '}') survive inside words.
TokenSequence tokenize(std::string_view text);

std::string join_tokens(const TokenSequence& tokens);

bool is_whitespace_cp(std::uint32_t cp);
bool is_peelable_punct_cp(std::uint32_t cp);

}  // namespace fairtext

#endif
