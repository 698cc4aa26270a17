#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace coauthlp {

/// Writes via a temporary sibling and rename so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::optional<std::string> read_file(const std::filesystem::path& path);

}  // namespace coauthlp
