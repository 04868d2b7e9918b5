#pragma once

#include <filesystem>
#include <string>

namespace qrsmem {

// Throws ConfigError if the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

// Writes to a temporary file in the target directory, then renames over the
// target so readers never see a partial file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// CRC-32 of the file contents as 8 lowercase hex digits.
std::string file_crc32_hex(const std::filesystem::path& path);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace qrsmem
