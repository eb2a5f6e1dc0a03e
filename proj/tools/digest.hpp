#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace mlcal::cli {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);
/// SHA-256 of a file's bytes; throws DataError if it cannot be read.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace mlcal::cli
