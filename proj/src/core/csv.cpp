#include "firmtrack/core/csv.hpp"

namespace firmtrack {

bool CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    int ci = in_.get();
    if (ci == std::istream::traits_type::eof()) return false;

    std::string field;
    enum State { Start, Plain, Quoted, QuoteEnd };
    State st = Start;
    bool done = false;
    while (!done) {
        if (ci == std::istream::traits_type::eof()) {
            fields.push_back(std::move(field));
            break;
        }
        char ch = static_cast<char>(ci);
        switch (st) {
            case Start:
                if (ch == '"') {
                    st = Quoted;
                } else if (ch == ',') {
                    fields.emplace_back();
                } else if (ch == '\n') {
                    fields.emplace_back();
                    done = true;
                } else if (ch != '\r') {
                    field.push_back(ch);
                    st = Plain;
                }
                break;
            case Plain:
            case QuoteEnd:
                if (ch == ',') {
                    fields.push_back(std::move(field));
                    field.clear();
                    st = Start;
                } else if (ch == '\n') {
                    fields.push_back(std::move(field));
                    done = true;
                } else if (ch != '\r') {
                    field.push_back(ch);
                }
                break;
            case Quoted:
                if (ch == '"') {
                    if (in_.peek() == '"') {
                        field.push_back('"');
                        in_.get();
                    } else {
                        st = QuoteEnd;
                    }
                } else {
                    field.push_back(ch);
                }
                break;
        }
        if (!done) ci = in_.get();
    }
    ++row_;
    return true;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        const std::string& f = fields[i];
        bool needs_quote = f.find_first_of(",\"\n\r") != std::string::npos;
        if (needs_quote) {
            out << '"';
            for (char c : f) {
                if (c == '"') out << "\"\"";
                else out << c;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    out << '\n';
}

std::unordered_map<std::string, size_t> header_index(const std::vector<std::string>& header) {
    std::unordered_map<std::string, size_t> idx;
    for (size_t i = 0; i < header.size(); ++i) idx.emplace(header[i], i);
    return idx;
}

}  // namespace firmtrack
