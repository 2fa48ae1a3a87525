#include "chatdom/text.hpp"

#include <cmath>
#include <cstdio>

namespace chatdom::text {

namespace {

int sequence_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead & 0xE0) == 0xC0) return 2;
    if ((lead & 0xF0) == 0xE0) return 3;
    if ((lead & 0xF8) == 0xF0) return 4;
    return 0;
}

bool is_latin1_upper(char32_t c) { return c >= 0xC0 && c <= 0xDE && c != 0xD7; }

// Edge characters that carry meaning in chat ("#5", "@nali", "$100").
bool keeps_at_edge(char32_t c) {
    switch (c) {
        case U'#': case U'@': case U'$': case U'%': case U'&': case U'+':
            return true;
        default:
            return false;
    }
}

}  // namespace

bool is_valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto lead = static_cast<unsigned char>(s[i]);
        const int len = sequence_length(lead);
        if (len == 0 || i + len > s.size()) return false;
        char32_t cp = len == 1 ? lead : lead & (0x7F >> len);
        for (int k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (b & 0x3F);
        }
        // Overlong forms, surrogates, out of range.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
            (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
            (cp >= 0xD800 && cp <= 0xDFFF))
            return false;
        i += len;
    }
    return true;
}

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto lead = static_cast<unsigned char>(s[i]);
        int len = sequence_length(lead);
        if (len == 0 || i + len > s.size()) len = 1;
        char32_t cp = len == 1 ? lead : lead & (0x7F >> len);
        for (int k = 1; k < len; ++k)
            cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t c : s) {
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else if (c < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (c >> 6)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        } else if (c < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (c >> 12)));
            out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (c >> 18)));
            out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

std::size_t scalar_count(std::string_view s) {
    std::size_t n = 0;
    for (char ch : s)
        if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++n;
    return n;
}

bool is_whitespace(char32_t c) {
    return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 ||
           c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 ||
           c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000;
}

bool is_word_char(char32_t c) {
    if (c < 0x80)
        return (c >= U'0' && c <= U'9') || (c >= U'A' && c <= U'Z') ||
               (c >= U'a' && c <= U'z');
    if (c < 0xC0) return c == 0xAA || c == 0xB5 || c == 0xBA;
    if (c == 0xD7 || c == 0xF7) return false;
    // General punctuation, symbols, arrows, dingbats, CJK punctuation,
    // variation selectors, emoji blocks.
    if (c >= 0x2000 && c <= 0x2BFF) return false;
    if (c >= 0x3000 && c <= 0x303F) return false;
    if (c >= 0xFE00 && c <= 0xFE6F) return false;
    if (c >= 0xFF00 && c <= 0xFF0F) return false;
    if (c >= 0x1F000 && c <= 0x1FAFF) return false;
    return !is_whitespace(c);
}

bool is_upper_alpha(char32_t c) {
    return (c >= U'A' && c <= U'Z') || is_latin1_upper(c);
}

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> tokens;
    const std::u32string cps = decode_utf8(s);
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && is_whitespace(cps[i])) ++i;
        std::size_t end = i;
        while (end < cps.size() && !is_whitespace(cps[end])) ++end;
        if (end == i) break;

        std::size_t lo = i, hi = end;
        bool has_word = false;
        for (std::size_t k = lo; k < hi; ++k) has_word = has_word || is_word_char(cps[k]);
        if (has_word) {
            while (lo < hi && !is_word_char(cps[lo]) && !keeps_at_edge(cps[lo])) ++lo;
            while (hi > lo && !is_word_char(cps[hi - 1]) && !keeps_at_edge(cps[hi - 1])) --hi;
            tokens.push_back(encode_utf8(std::u32string_view(cps).substr(lo, hi - lo)));
        }
        i = end;
    }
    return tokens;
}

std::string fold_case(std::string_view s) {
    std::u32string cps = decode_utf8(s);
    for (char32_t& c : cps) {
        if ((c >= U'A' && c <= U'Z') || is_latin1_upper(c))
            c += 0x20;
        else if (c == 0x2018 || c == 0x2019)
            c = U'\'';
    }
    return encode_utf8(cps);
}

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace chatdom::text
