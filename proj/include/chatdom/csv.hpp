#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

// Minimal RFC-4180 reader/writer. Quoted fields may span lines and use
// "" as an escaped quote; both LF and CRLF record delimiters are accepted.
namespace chatdom::csv {

struct Record {
    std::size_t line = 0;  // 1-based line on which the record starts
    std::vector<std::string> fields;
};

// Reads all records. A leading UTF-8 byte-order mark is skipped. Blank
// lines are skipped. Throws ParseError on an unterminated quote or on
// stray characters after a closing quote.
std::vector<Record> read_all(std::istream& in);
std::vector<Record> read_all(std::string_view data);

// Index of each named column in a header record; throws ParseError
// naming the first missing required column.
class Header {
public:
    explicit Header(const Record& header);

    bool has(std::string_view name) const;
    std::size_t index(std::string_view name) const;  // throws if absent
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::size_t line_;
};

std::string quote(std::string_view field);
// Quotes only when the field contains a delimiter, quote or line break.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace chatdom::csv
