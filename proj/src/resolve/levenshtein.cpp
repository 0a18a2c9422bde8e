#include "firmtrack/resolve/levenshtein.hpp"

#include <algorithm>
#include <vector>

namespace firmtrack::resolve {

int levenshtein(std::string_view a, std::string_view b) {
    if (a.size() > b.size()) std::swap(a, b);
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    if (n == 0) return m;

    std::vector<int> row(n + 1);
    for (int i = 0; i <= n; ++i) row[i] = i;
    for (int j = 1; j <= m; ++j) {
        int diag = row[0];
        row[0] = j;
        for (int i = 1; i <= n; ++i) {
            int sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            diag = row[i];
            row[i] = std::min({row[i] + 1, row[i - 1] + 1, sub});
        }
    }
    return row[n];
}

}  // namespace firmtrack::resolve
