#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace thinslice::csv {

/// Quote a field if it contains a comma, quote, or newline.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

/// Parse a single CSV record. Embedded newlines inside quoted fields are not
/// supported; none of our file formats produce them.
std::vector<std::string> parse_row(std::string_view line);

/// Read all records, skipping empty lines. Throws DataError if unreadable.
std::vector<std::vector<std::string>> read_file(const std::filesystem::path& path);

}  // namespace thinslice::csv
