#pragma once

#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers and the word tokenizer shared by corpus statistics and
// feature extraction.
namespace chatdom::text {

bool is_valid_utf8(std::string_view s);

// Decodes valid UTF-8. Behaviour on invalid input is unspecified; call
// is_valid_utf8 first on untrusted data.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

// Number of Unicode scalar values in a valid UTF-8 string.
std::size_t scalar_count(std::string_view s);

bool is_whitespace(char32_t c);

// Letters and digits, including non-ASCII letters. Punctuation, symbols
// and emoji are not word characters.
bool is_word_char(char32_t c);

bool is_upper_alpha(char32_t c);

// Splits on Unicode whitespace, strips leading and trailing punctuation
// from each chunk and drops chunks without any letter or digit. Internal
// characters (apostrophes, hyphens) are kept, case is never changed.
// '#', '@', '$', '%', '&' and '+' survive at token edges.
std::vector<std::string> tokenize(std::string_view s);

// Lowercases ASCII and Latin-1 letters and maps typographic apostrophes
// to '\''. Used for lexicon matching only.
std::string fold_case(std::string_view s);

// Fixed 6-significant-digit rendering used in every report file.
std::string format_number(double v);

}  // namespace chatdom::text
