#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace allockit::io {

/// Header plus rows of raw string fields. `line_numbers[i]` is the 1-based source line of row i.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    std::optional<std::size_t> column(std::string_view name) const;
};

/// Splits one CSV record. Fields may be wrapped in double quotes ("" escapes a quote).
std::vector<std::string> split_csv_line(std::string_view line);

/// Reads a UTF-8 CSV file with a header row; blank lines are skipped. Throws DataError.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
std::string to_csv_string(const CsvTable& table);

/// Shortest decimal text that parses back to the identical double; "nan"/"inf"/"-inf" otherwise.
std::string format_double(double v);

/// Strict parse of a whole field; nullopt on any trailing or malformed text.
std::optional<double> parse_double(std::string_view text);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace allockit::io
