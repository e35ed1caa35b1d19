#pragma once

// Minimal RFC 4180 reader/writer shared by the file formats.

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace tweetq::csv {

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Reads the next record into `fields`. Returns false at end of input.
    /// Quoted fields may span lines. Throws ParseError on an unterminated quote.
    bool next(std::vector<std::string>& fields);

    /// 1-based line on which the last returned record started.
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::size_t record_line_ = 0;
};

void write_field(std::ostream& out, std::string_view field);

} // namespace tweetq::csv
