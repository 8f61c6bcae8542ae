#include "gazeforge/text.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gazeforge/errors.hpp"

namespace gazeforge::text {

std::string shortest(double value) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

std::string sig12(double value) {
    std::array<char, 40> buf{};
    const int len = std::snprintf(buf.data(), buf.size(), "%.12g", value);
    return std::string(buf.data(), static_cast<std::size_t>(len));
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

bool parse_double(std::string_view field, double& out) {
    field = trim(field);
    if (field.empty() || field == "NA" || field == "NaN" || field == "nan" || field == "NAN") {
        out = std::numeric_limits<double>::quiet_NaN();
        return true;
    }
    if (field.front() == '+') {
        field.remove_prefix(1);
    }
    const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    return res.ec == std::errc{} && res.ptr == field.data() + field.size();
}

bool parse_int(std::string_view field, long long& out) {
    field = trim(field);
    const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    return !field.empty() && res.ec == std::errc{} && res.ptr == field.data() + field.size();
}

std::vector<double> parse_double_list(std::string_view list) {
    std::vector<double> out;
    for (auto item : split(list, ',')) {
        double v = 0.0;
        if (!parse_double(item, v) || !std::isfinite(v)) {
            throw ConfigError("invalid number in list: '" + std::string(item) + "'");
        }
        out.push_back(v);
    }
    return out;
}

std::vector<int> parse_int_list(std::string_view list) {
    std::vector<int> out;
    for (auto item : split(list, ',')) {
        long long v = 0;
        if (!parse_int(item, v)) {
            throw ConfigError("invalid integer in list: '" + std::string(item) + "'");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

}  // namespace gazeforge::text
