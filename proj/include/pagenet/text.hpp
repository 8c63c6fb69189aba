#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pagenet {

// Splits one CSV line. Fields may be double-quoted; embedded quotes are
// doubled per RFC 4180. Throws ParseError on an unterminated quote.
std::vector<std::string> split_csv_line(std::string_view line);

// Quotes a field if it contains a comma, quote, or newline.
std::string csv_escape(std::string_view field);

// Shortest round-trip decimal representation (std::to_chars), so exports are
// byte-stable across runs.
std::string format_double(double value);

// Strict full-string numeric parses; return false on trailing garbage.
bool parse_double(std::string_view text, double& out);
bool parse_int64(std::string_view text, std::int64_t& out);

std::string_view trim(std::string_view text);

// FNV-1a 64-bit over a byte string, rendered as 16 hex digits.
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace pagenet
