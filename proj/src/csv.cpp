#include "csv.hpp"

#include "tweetq/error.hpp"

namespace tweetq::csv {

bool Reader::next(std::vector<std::string>& fields)
{
    fields.clear();
    std::string line;
    // Skip blank lines between records.
    do {
        if (!std::getline(in_, line))
            return false;
        ++line_;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
    } while (line.empty());
    record_line_ = line_;

    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    while (true) {
        if (i == line.size()) {
            if (!quoted)
                break;
            // Quoted field continues on the next physical line.
            if (!std::getline(in_, line))
                throw ParseError(record_line_, "record", "unterminated quoted field");
            ++line_;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            field.push_back('\n');
            i = 0;
            continue;
        }
        const char c = line[i++];
        if (quoted) {
            if (c == '"') {
                if (i < line.size() && line[i] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return true;
}

void write_field(std::ostream& out, std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        out << field;
        return;
    }
    out << '"';
    for (char c : field) {
        if (c == '"')
            out << '"';
        out << c;
    }
    out << '"';
}

} // namespace tweetq::csv
