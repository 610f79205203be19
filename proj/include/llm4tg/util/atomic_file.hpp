#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace llm4tg::util {

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace llm4tg::util
