#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hemeroteca {

/// Writes to a sibling temp file and renames it over the target.
void write_atomically(const std::filesystem::path& target, std::string_view content);

/// Appends one line and flushes it to the file.
void append_line(const std::filesystem::path& file, std::string_view line);

/// Non-blank lines of a file; a missing file reads as empty.
std::vector<std::string> read_lines(const std::filesystem::path& file);

}  // namespace hemeroteca
