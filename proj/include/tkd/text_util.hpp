#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tkd::text {

/// Splits UTF-8 text into codepoint substrings. Invalid bytes become
/// single-byte units so the function is total.
std::vector<std::string> codepoints(std::string_view s);
std::size_t codepoint_count(std::string_view s);

/// Shortest round-trip decimal form ("57", "3.5", "0.0980665").
std::string format_exact(double v);
/// Display form of a numeric cell: at most 10 significant digits, no
/// trailing zeros.
std::string format_display(double v);
/// Fixed-point with up to `decimals` places, trailing zeros trimmed.
std::string format_fixed(double v, int decimals);

/// Parses a full decimal number ("1.6", "-30", "2e3"); accepts ',' as the
/// decimal separator. Returns nullopt when trailing garbage remains.
std::optional<double> parse_number(std::string_view s);

/// Double-quoted literal with \" \\ \n \t escapes.
std::string quote(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string trim(std::string_view s);

/// Greedy word wrap to `budget` codepoints per line. Words longer than
/// the budget are broken hard; explicit newlines are kept.
std::vector<std::string> wrap(std::string_view s, std::size_t budget);

}  // namespace tkd::text
