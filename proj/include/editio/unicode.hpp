#pragma once

#include <string>
#include <string_view>

namespace editio {

/// Strict UTF-8 decoding. Rejects overlong forms, surrogates and
/// truncated tails; throws ParseError with the byte offset of the
/// first invalid byte.
std::u32string decode_utf8(std::string_view bytes);

std::string encode_utf8(std::u32string_view text);

/// CRLF -> LF, lone CR -> LF. Applied before any alphabet mapping so
/// that mixed line endings from different repositories never reach the
/// model as distinct symbols.
std::u32string collapse_line_endings(std::u32string_view text);

/// Visible stand-in for non-printable code points: C0 controls map to
/// their Control Pictures glyphs (U+2400 block, e.g. a line feed shows
/// as U+240A), DEL to U+2421, C1 controls to U+FFFD. Everything else is
/// returned unchanged.
char32_t display_glyph(char32_t cp);

}  // namespace editio
