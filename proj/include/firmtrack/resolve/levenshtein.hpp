#pragma once

#include <string_view>

namespace firmtrack::resolve {

/// Unit-cost insert/delete/substitute edit distance.
int levenshtein(std::string_view a, std::string_view b);

}  // namespace firmtrack::resolve
