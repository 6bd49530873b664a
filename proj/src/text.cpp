#include "plrtest/text.hpp"

#include "plrtest/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace plrtest {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string_view trim(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    return text;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_double(std::string_view text, std::string_view field) {
    text = trim(text);
    if (text == "nan") return std::nan("");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw FormatError("field '" + std::string(field) + "' is not a number: '" +
                          std::string(text) + "'");
    return value;
}

int parse_int(std::string_view text, std::string_view field) {
    text = trim(text);
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw FormatError("field '" + std::string(field) + "' is not an integer: '" +
                          std::string(text) + "'");
    return value;
}

}  // namespace plrtest
