#pragma once

// Small text helpers shared by the CSV readers and writers.

#include <string>
#include <string_view>
#include <vector>

namespace plrtest {

/// Shortest decimal representation that round-trips exactly.
std::string format_double(double value);

std::string_view trim(std::string_view text);
std::vector<std::string> split_csv_line(std::string_view line);

/// Throw FormatError naming `field` on malformed input.
double parse_double(std::string_view text, std::string_view field);
int parse_int(std::string_view text, std::string_view field);

}  // namespace plrtest
