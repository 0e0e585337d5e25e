#pragma once

#include <string>
#include <string_view>

namespace repetilab::utf8 {

// Throws ParseError on malformed input or surrogate code points.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);
std::string encode(char32_t scalar);

// Printable form of a scalar for diagnostics; non-printable ASCII and
// non-ASCII become \u{XXXX} when `escape` is set.
std::string render(char32_t scalar, bool escape = false);

}  // namespace repetilab::utf8
