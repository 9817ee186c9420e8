#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace cylarm {

// Shortest decimal that parses back to the same double.
inline void append_shortest(std::string& out, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    out.append(buf, res.ptr);
}

inline void append_fixed(std::string& out, double value, int precision) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, precision);
    if (res.ec != std::errc{}) {
        out += "0";
        return;
    }
    std::string_view text(buf, static_cast<std::size_t>(res.ptr - buf));
    if (text == "-0" || text.find_first_not_of("-0.") == std::string_view::npos) {
        // Avoid "-0.00" so output does not depend on the sign of tiny values.
        if (!text.empty() && text.front() == '-') text.remove_prefix(1);
    }
    out.append(text);
}

inline std::string shortest(double value) {
    std::string s;
    append_shortest(s, value);
    return s;
}

inline double parse_double(std::string_view text) {
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return value;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

}  // namespace cylarm
