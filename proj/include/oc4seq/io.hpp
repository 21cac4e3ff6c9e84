#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace oc4seq::io {

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace oc4seq::io
