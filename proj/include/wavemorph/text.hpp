#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wavemorph {

/// Shortest round-trip decimal form ("inf" / "-inf" for infinities).
std::string format_double(double v);
double parse_double(std::string_view text, std::string_view what);
int parse_int(std::string_view text, std::string_view what);

/// Minimal comma-separated parsing (no quoting). Verifies the header matches
/// `columns` exactly and every row has that many fields; returns data rows.
std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                const std::vector<std::string>& columns,
                                                const std::string& source);

std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

} // namespace wavemorph
