#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace firmtrack {

std::string to_upper(std::string_view s);
std::string_view trim(std::string_view s);

/// Collapses runs of whitespace to single spaces and trims the ends.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_tokens(std::string_view s);  // on whitespace

bool starts_with(std::string_view s, std::string_view prefix);

}  // namespace firmtrack
