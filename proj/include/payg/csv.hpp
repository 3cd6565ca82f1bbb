#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "error.hpp"

namespace payg {

/// Comma-separated file with a header row. No quoting: fields never contain commas.
class CsvTable {
public:
    CsvTable(std::string source, std::vector<std::string> header,
             std::vector<std::vector<std::string>> rows)
        : source_(std::move(source)), header_(std::move(header)), rows_(std::move(rows))
    {
    }

    std::size_t size() const noexcept { return rows_.size(); }
    std::vector<std::string> const& header() const noexcept { return header_; }
    std::string const& source() const noexcept { return source_; }

    bool has_column(std::string_view name) const noexcept
    {
        for (auto const& h : header_) {
            if (h == name) {
                return true;
            }
        }
        return false;
    }

    std::size_t column(std::string_view name) const
    {
        for (std::size_t i = 0; i < header_.size(); ++i) {
            if (header_[i] == name) {
                return i;
            }
        }
        throw ValidationError(source_ + ": missing column '" + std::string(name) + "'");
    }

    std::string const& text(std::size_t row, std::size_t col) const
    {
        auto const& r = rows_.at(row);
        if (col >= r.size()) {
            throw ValidationError(where(row) + ": too few fields");
        }
        return r[col];
    }

    double number(std::size_t row, std::size_t col) const
    {
        auto const& s = text(row, col);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw ValidationError(where(row) + ": '" + s + "' is not a number (column "
                                  + header_[col] + ")");
        }
        return v;
    }

    int integer(std::size_t row, std::size_t col) const
    {
        auto const& s = text(row, col);
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw ValidationError(where(row) + ": '" + s + "' is not an integer (column "
                                  + header_[col] + ")");
        }
        return v;
    }

    /// "file:line" of a data row (line 1 is the header).
    std::string where(std::size_t row) const { return source_ + ":" + std::to_string(row + 2); }

private:
    std::string source_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto const comma = line.find(',', start);
        auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                        : comma - start);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) {
            field.remove_suffix(1);
        }
        while (!field.empty() && field.front() == ' ') {
            field.remove_prefix(1);
        }
        out.emplace_back(field);
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

inline CsvTable parse_csv(std::string const& content, std::string source)
{
    std::istringstream in(content);
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (first) {
            if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
                line.erase(0, 3);
            }
            header = split_csv_line(line);
            first = false;
        }
        else {
            rows.push_back(split_csv_line(line));
        }
    }
    if (first) {
        throw ValidationError(source + ": empty file (expected a header row)");
    }
    return CsvTable(std::move(source), std::move(header), std::move(rows));
}

inline std::string read_text_file(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline CsvTable read_csv(std::filesystem::path const& path)
{
    return parse_csv(read_text_file(path), path.string());
}

} // namespace payg
