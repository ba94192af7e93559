#include "fairtext/tokenize.hpp"

namespace fairtext {

namespace {

// Decodes one UTF-8 codepoint starting at i; advances i past it.
// Invalid bytes are passed through as single-byte codepoints.
std::uint32_t decode_utf8(std::string_view s, std::size_t& i) {
    unsigned char b0 = s[i];
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    std::uint32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return b0;
    }
    if (i + len > s.size()) {
        ++i;
        return b0;
    }
    for (int k = 1; k < len; ++k) {
        unsigned char bk = s[i + k];
        if ((bk & 0xC0) != 0x80) {
            ++i;
            return b0;
        }
        cp = (cp << 6) | (bk & 0x3F);
    }
    i += len;
    return cp;
}

struct Codepoint {
    std::uint32_t cp;
    std::size_t offset;  // byte offset in source
    std::size_t length;  // byte length
};

std::vector<Codepoint> decode_all(std::string_view s) {
    std::vector<Codepoint> out;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t start = i;
        std::uint32_t cp = decode_utf8(s, i);
        out.push_back({cp, start, i - start});
    }
    return out;
}

}  // namespace

bool is_whitespace_cp(std::uint32_t cp) {
    switch (cp) {
        case 0x09:
        case 0x0A:
        case 0x0B:
        case 0x0C:
        case 0x0D:
        case 0x20:
        case 0x85:
        case 0xA0:
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202F:
        case 0x205F:
        case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_peelable_punct_cp(std::uint32_t cp) {
    // ASCII punctuation minus '<', '>', '{', '}': angle brackets are kept so
    // the <Name>/<Gender> mask tokens round-trip, and curly braces occur
    // word-internally in the transliteration scheme of the bundled data.
    switch (cp) {
        case '!':
        case '"':
        case '#':
        case '$':
        case '%':
        case '&':
        case '\'':
        case '(':
        case ')':
        case '*':
        case '+':
        case ',':
        case '-':
        case '.':
        case '/':
        case ':':
        case ';':
        case '=':
        case '?':
        case '@':
        case '[':
        case '\\':
        case ']':
        case '^':
        case '_':
        case '`':
        case '|':
        case '~':
            return true;
        // Common non-ASCII sentence punctuation, including the Bangla danda.
        case 0x0964:  // devanagari/bangla danda
        case 0x0965:  // double danda
        case 0x00A1:
        case 0x00BF:
        case 0x060C:
        case 0x061B:
        case 0x061F:
        case 0x2013:
        case 0x2014:
        case 0x2018:
        case 0x2019:
        case 0x201C:
        case 0x201D:
        case 0x2026:
            return true;
        default:
            return false;
    }
}

TokenSequence tokenize(std::string_view text) {
    TokenSequence tokens;
    auto cps = decode_all(text);
    std::size_t i = 0;
    const std::size_t n = cps.size();

    auto slice = [&](std::size_t from, std::size_t to) {
        std::size_t begin = cps[from].offset;
        std::size_t end = cps[to - 1].offset + cps[to - 1].length;
        return std::string(text.substr(begin, end - begin));
    };

    while (i < n) {
        while (i < n && is_whitespace_cp(cps[i].cp)) ++i;
        if (i >= n) break;
        std::size_t start = i;
        while (i < n && !is_whitespace_cp(cps[i].cp)) ++i;
        // [start, i) is one whitespace-delimited chunk; peel the edges.
        std::size_t lo = start, hi = i;
        std::size_t lead_end = lo;
        while (lead_end < hi && is_peelable_punct_cp(cps[lead_end].cp)) ++lead_end;
        std::size_t trail_begin = hi;
        while (trail_begin > lead_end && is_peelable_punct_cp(cps[trail_begin - 1].cp)) {
            --trail_begin;
        }
        for (std::size_t k = lo; k < lead_end; ++k) tokens.push_back(slice(k, k + 1));
        if (lead_end < trail_begin) tokens.push_back(slice(lead_end, trail_begin));
        for (std::size_t k = trail_begin; k < hi; ++k) tokens.push_back(slice(k, k + 1));
    }
    return tokens;
}

std::string join_tokens(const TokenSequence& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

}  // namespace fairtext
