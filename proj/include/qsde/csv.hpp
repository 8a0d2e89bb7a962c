// csv.hpp — RFC-4180 style table writer with locale-independent number formatting.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qsde/linalg.hpp"

namespace qsde {

/// Shortest round-trip decimal representation ('.' separator, no locale).
std::string format_double(double x);
std::string format_int(long long x);

/// Quotes a field if it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_.size(); }

    /// Throws InvalidInput if the row width differs from the header.
    void add_row(std::vector<std::string> row);

    /// Header and rows joined with CRLF line ends.
    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace qsde
