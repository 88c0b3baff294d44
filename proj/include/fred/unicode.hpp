#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fred::unicode {

/// Byte offset of the first malformed UTF-8 sequence, or nullopt when the
/// input is well-formed. Overlong forms, surrogates and values past U+10FFFF
/// are all rejected.
std::optional<std::size_t> find_invalid_utf8(std::string_view text);

/// Decodes well-formed UTF-8. Behavior on malformed input is to substitute
/// U+FFFD per bad byte.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

/// Whitespace in the sense of Python's str.isspace(), which is what every
/// reference BLEU/chrF implementation splits on.
bool is_space(char32_t cp);

/// Python str.split() with no arguments.
std::vector<std::string_view> split_whitespace(std::string_view text);

/// Extended grapheme clusters (UAX #29) as views into `text`.
std::vector<std::string_view> graphemes(std::string_view text);

std::string to_nfc(std::string_view text);

}  // namespace fred::unicode
