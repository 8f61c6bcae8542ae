#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gazeforge::text {

// Shortest decimal text that parses back to the identical double.
std::string shortest(double value);

// 12 significant digits ("%.12g"); used for every exported table.
std::string sig12(double value);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view line, char sep);

// Parses a whole field as a double; NA/NaN/empty yield quiet NaN. Returns
// false on trailing garbage.
bool parse_double(std::string_view field, double& out);

bool parse_int(std::string_view field, long long& out);

// "1,2,3" -> {1,2,3}; throws ConfigError on a bad entry.
std::vector<double> parse_double_list(std::string_view list);
std::vector<int> parse_int_list(std::string_view list);

}  // namespace gazeforge::text
