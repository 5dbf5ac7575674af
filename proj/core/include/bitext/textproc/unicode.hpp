#pragma once

#include <string>
#include <string_view>

namespace bitext::text {

// UTF-8 <-> UTF-32. Invalid sequences decode to U+FFFD.
std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);

// Number of code points in a UTF-8 string.
std::size_t char_count(std::string_view utf8);

bool is_space(char32_t c);
bool is_punct(char32_t c);
bool is_alpha(char32_t c);

// Lowercases, strips punctuation, removes combining marks after canonical
// decomposition and collapses whitespace runs to single spaces (trimmed).
// Idempotent.
std::string normalize_for_surface(std::string_view text);

}  // namespace bitext::text
