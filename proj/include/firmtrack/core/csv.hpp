#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

namespace firmtrack {

/// Streaming reader for comma-separated files with quoted fields.
/// Handles embedded commas, doubled quotes and quoted newlines; rows are
/// returned in file order.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Reads one record. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    /// 1-based index of the last record read.
    long row() const { return row_; }

private:
    std::istream& in_;
    long row_ = 0;
};

/// Writes one CSV record, quoting fields that need it.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Header lookup: column name -> index.
std::unordered_map<std::string, size_t> header_index(const std::vector<std::string>& header);

}  // namespace firmtrack
