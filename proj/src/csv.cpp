#include "chatdom/csv.hpp"

#include <algorithm>
#include <iterator>
#include <ostream>
#include <sstream>

#include "chatdom/error.hpp"

namespace chatdom::csv {

std::vector<Record> read_all(std::istream& in) {
    std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return read_all(std::string_view(data));
}

std::vector<Record> read_all(std::string_view data) {
    if (data.substr(0, 3) == "\xEF\xBB\xBF") data.remove_prefix(3);

    std::vector<Record> records;
    std::size_t line = 1;
    std::size_t i = 0;
    const std::size_t n = data.size();

    while (i < n) {
        // Blank line.
        if (data[i] == '\n' || (data[i] == '\r' && i + 1 < n && data[i + 1] == '\n')) {
            i += data[i] == '\r' ? 2 : 1;
            ++line;
            continue;
        }

        Record rec;
        rec.line = line;
        std::string field;
        bool done = false;
        while (!done) {
            field.clear();
            if (i < n && data[i] == '"') {
                ++i;
                for (;;) {
                    if (i >= n) throw ParseError("unterminated quoted field", rec.line);
                    char c = data[i++];
                    if (c == '"') {
                        if (i < n && data[i] == '"') {
                            field.push_back('"');
                            ++i;
                        } else {
                            break;
                        }
                    } else {
                        if (c == '\n') ++line;
                        field.push_back(c);
                    }
                }
                if (i < n && data[i] != ',' && data[i] != '\n' &&
                    !(data[i] == '\r' && i + 1 < n && data[i + 1] == '\n'))
                    throw ParseError("unexpected character after closing quote", line);
            } else {
                while (i < n && data[i] != ',' && data[i] != '\n' &&
                       !(data[i] == '\r' && i + 1 < n && data[i + 1] == '\n')) {
                    if (data[i] == '"') throw ParseError("quote inside unquoted field", line);
                    field.push_back(data[i++]);
                }
            }
            rec.fields.push_back(field);

            if (i >= n) {
                done = true;
            } else if (data[i] == ',') {
                ++i;
            } else {
                i += data[i] == '\r' ? 2 : 1;
                ++line;
                done = true;
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

Header::Header(const Record& header) : names_(header.fields), line_(header.line) {}

bool Header::has(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t Header::index(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end())
        throw ParseError("missing required column '" + std::string(name) + "'", line_);
    return static_cast<std::size_t>(it - names_.begin());
}

std::string quote(std::string_view field) {
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    return quote(field);
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k) out << ',';
        out << escape(fields[k]);
    }
    out << '\n';
}

}  // namespace chatdom::csv
